#include "field_linalg.hpp"

#include <stdexcept>

namespace paramsep::detail {

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Symbol eval(const Field& f, const Poly& p, Symbol x) {
    Symbol acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = f.mul(acc, x) ^ p[i];
    return acc;
}

std::pair<Poly, Poly> divmod(const Field& f, Poly a, const Poly& b_in) {
    Poly b = b_in;
    trim(b);
    if (b.empty()) throw std::domain_error("divmod: division by zero polynomial");
    trim(a);
    if (a.size() < b.size()) return {Poly{}, a};
    Poly q(a.size() - b.size() + 1, 0);
    const Symbol lead_inv = f.inv(b.back());
    for (std::size_t i = a.size(); i-- >= b.size();) {
        const Symbol c = f.mul(a[i], lead_inv);
        if (c == 0) continue;
        const std::size_t shift = i - (b.size() - 1);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] ^= f.mul(c, b[j]);
    }
    trim(a);
    trim(q);
    return {q, a};
}

std::vector<std::size_t> rref(const Field& f, Matrix& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const Symbol inv = f.inv(rows[r][c]);
        auto& pr = rows[r];
        for (auto& x : pr) x = f.mul(x, inv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r) continue;
            const Symbol factor = rows[i][c];
            if (factor == 0) continue;
            auto& ri = rows[i];
            for (std::size_t j = c; j < pr.size(); ++j) ri[j] ^= f.mul(factor, pr[j]);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::optional<SymbolVector> null_vector(const Field& f, Matrix a, std::size_t ncols) {
    const auto pivots = rref(f, a, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::size_t free_col = ncols;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    }
    if (free_col == ncols) return std::nullopt;
    SymbolVector x(ncols, 0);
    x[free_col] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][free_col];
    return x;
}

std::optional<SymbolVector> solve(const Field& f, Matrix a, const SymbolVector& b, std::size_t ncols) {
    if (a.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i].resize(ncols + 1, 0);
        a[i][ncols] = b[i];
    }
    const auto pivots = rref(f, a, ncols);
    for (std::size_t i = pivots.size(); i < a.size(); ++i)
        if (a[i][ncols] != 0) return std::nullopt;
    SymbolVector x(ncols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][ncols];
    return x;
}

}  // namespace paramsep::detail
