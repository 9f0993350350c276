#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toepspec/matrix.hpp"

namespace toepspec {

/// Sentinel stored in LogDet::log_abs for singular matrices.
inline constexpr double kLogZero = -1e300;

struct LogDet {
    double log_abs = 0.0;  // log |det|, or kLogZero when singular
    Complex phase = 1.0;   // det / |det|
    bool singular = false;

    /// phase * exp(log_abs); 0 when singular.
    [[nodiscard]] Complex value() const;
};

struct SpectrumResult {
    std::vector<Complex> eigenvalues;
    int iterations = 0;
    bool converged = false;
};

/// Partial-pivoted LU.
[[nodiscard]] LogDet lu_logdet(const ComplexMatrix& m);
[[nodiscard]] Complex determinant(const ComplexMatrix& m);

/// Householder reduction to upper Hessenberg form followed by implicitly
/// shifted complex QR (Wilkinson shift) with deflation. Gives up after 30n
/// sweeps and reports converged = false.
[[nodiscard]] SpectrumResult eigenvalues(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix (lower triangle is read), ascending.
/// Householder tridiagonalization, then implicit QL.
[[nodiscard]] std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Singular values, nonincreasing, from the Hermitian 2N x 2N matrix
/// [[0, M], [M*, 0]].
[[nodiscard]] std::vector<double> singular_values(const ComplexMatrix& m);

/// (1/2N) sum_j [1/(xi - s_j) + 1/(xi + s_j)], the Stieltjes transform of the
/// symmetrized singular-value distribution. Requires Im xi != 0.
[[nodiscard]] Complex stieltjes(std::span<const double> singular_values, Complex xi);
[[nodiscard]] Complex stieltjes(const ComplexMatrix& m, Complex xi);

[[nodiscard]] double hs_norm(const ComplexMatrix& m);
/// Power iteration on M M*; a lower bound on the operator norm.
[[nodiscard]] double op_norm_est(const ComplexMatrix& m, int iters);
[[nodiscard]] double smin(const ComplexMatrix& m);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal divided out.
[[nodiscard]] ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed);

}  // namespace toepspec
