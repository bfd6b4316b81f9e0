#pragma once

// Polynomial and dense linear-algebra helpers over GF(2^ell), shared by the decoders.

#include <cstddef>
#include <optional>
#include <vector>

#include "paramsep/field.hpp"

namespace paramsep::detail {

/// Coefficients low degree first. An empty vector is the zero polynomial.
using Poly = SymbolVector;

void trim(Poly& p);
Symbol eval(const Field& f, const Poly& p, Symbol x);
/// Quotient and remainder of a / b; b must be nonzero.
std::pair<Poly, Poly> divmod(const Field& f, Poly a, const Poly& b);

using Matrix = std::vector<SymbolVector>;

/// In-place reduced row echelon form over the first `ncols` columns. Returns pivot columns.
std::vector<std::size_t> rref(const Field& f, Matrix& rows, std::size_t ncols);

/// Some nonzero x with A x = 0, if the null space is nontrivial.
std::optional<SymbolVector> null_vector(const Field& f, Matrix a, std::size_t ncols);

/// A solution of A x = b with free variables set to zero, if consistent.
std::optional<SymbolVector> solve(const Field& f, Matrix a, const SymbolVector& b, std::size_t ncols);

}  // namespace paramsep::detail
