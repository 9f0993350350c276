#pragma once

#include <cstddef>
#include <span>

#include "toepspec/linalg.hpp"
#include "toepspec/matrix.hpp"
#include "toepspec/symbol.hpp"

namespace toepspec {

/// Band split (dbar1 above, dbar2 below the diagonal) of a shifted symbol;
/// dbar1 + dbar2 must equal the symbol degree d.
struct ShiftSpec {
    int dbar1 = 0;
    int dbar2 = 0;
};

/// J_N: ones on the first superdiagonal.
[[nodiscard]] ComplexMatrix jordan(std::size_t n);

/// T_N(a): entry (i, j) = a_{j-i}.
[[nodiscard]] ComplexMatrix build(const Symbol& s, std::size_t n);

/// T_N(a) - z Id.
[[nodiscard]] ComplexMatrix build_z(const Symbol& s, Complex z, std::size_t n);

/// Toeplitz matrix with entry (i, j) = a'_{(j-i) + (d1 - dbar1)} for
/// -dbar2 <= j - i <= dbar1, where a'_k = a_k - z [k == 0].
[[nodiscard]] ComplexMatrix build_shifted(const Symbol& s, Complex z, ShiftSpec spec,
                                          std::size_t n);

/// Max entrywise deviation between a_{d1} prod_l (J + lambda_l(z) Id) and the
/// upper-triangular T_{N+d2}(z; d, 0).
[[nodiscard]] double bidiagonal_factor_check(const Symbol& s, Complex z, std::size_t n);

/// tr[J^{m1} (J*)^{n1} ... J^{mk} (J*)^{nk}] by tracking basis vectors.
[[nodiscard]] Complex trace_word(std::span<const std::size_t> m, std::span<const std::size_t> n,
                                 std::size_t size);

/// (1/N) tr ((z - T_N)(z - T_N)^*)^k.
[[nodiscard]] double moment_lhs(const Symbol& s, Complex z, int k, std::size_t n);

/// E |z - a(U)|^{2k} by the trapezoid rule on 2^14 nodes.
[[nodiscard]] double moment_rhs(const Symbol& s, Complex z, int k);

/// det T_N(z) from the root expansion
///   sum_{|I| = d1} C_I a_{d1}^N prod_{l in I} lambda_l(z)^N,
///   C_I = prod_{j in I, k not in I} lambda_j / (lambda_j - lambda_k),
/// evaluated term by term in log space. Rejects z with nearly repeated roots.
[[nodiscard]] LogDet widom_sum(const Symbol& s, Complex z, std::size_t n);

}  // namespace toepspec
