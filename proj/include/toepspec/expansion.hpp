#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "toepspec/matrix.hpp"
#include "toepspec/symbol.hpp"

namespace toepspec {

/// Strictly increasing 0-based indices into [0, N).
using Subset = std::vector<std::size_t>;

inline constexpr std::size_t kDetSumMaxN = 12;
inline constexpr std::size_t kCornerPkMaxN = 60;

/// Sign of the permutation that moves X in front of its complement:
/// (-1)^{sum_t (x_t - t)}.
[[nodiscard]] int perm_sign(std::span<const std::size_t> x, std::size_t n);

/// det(A[X^c; Y^c]) with the convention det of an empty matrix = 1.
[[nodiscard]] Complex minor_det(const ComplexMatrix& a, std::span<const std::size_t> x,
                                std::span<const std::size_t> y);

/// det(A + B) = sum_{|X| = |Y|} sgn(X) sgn(Y) det(A[X^c; Y^c]) det(B[X; Y]),
/// enumerating only subsets of B's nonzero rows and columns. N <= 12.
[[nodiscard]] Complex det_sum_decomposition(const ComplexMatrix& a, const ComplexMatrix& b);

/// Closed form of det((J_N + zeta Id)[X^c; Y^c]).
[[nodiscard]] Complex bidiag_subdet(Complex zeta, std::span<const std::size_t> x,
                                    std::span<const std::size_t> y, std::size_t n);

/// P_k(z) = sum_{|X| = |Y| = k} sgn(X) sgn(Y) det(T_N(z)[X^c; Y^c]) det(Delta[X; Y]).
/// Zero for k above the number of nonzero rows or columns of Delta. N <= 60.
[[nodiscard]] Complex corner_pk(const Symbol& s, Complex z, const ComplexMatrix& delta, int k);

struct DominanceReport {
    int defect = 0;                  // d1 - d0(z)
    std::vector<Complex> pk;         // P_0 .. P_d
    double log_normalizer = 0.0;     // N log|a_{d1}| + N sum_{i <= d0} log|lambda_i|
    double ratio_above = 0.0;        // |sum_{k > |defect|} P_k| / |P_{|defect|}|
    double ratio_below = 0.0;        // sum_{k < |defect|} |P_k| / normalizer
    double normalized_pd = 0.0;      // |P_{|defect|}| / normalizer
    double tail_above = 0.0;         // |sum_{k > |defect|} P_k| / normalizer
};

/// Dominant-term diagnostics for det(T_N(z) + Delta). Rejects BOUNDARY z.
[[nodiscard]] DominanceReport dominance_report(const Symbol& s, Complex z,
                                               const ComplexMatrix& delta);

/// One monomial coef * prod_{i in indices} U_i of a multilinear polynomial.
struct MultilinearTerm {
    Complex coef;
    std::vector<std::size_t> indices;  // distinct, 0-based
};

struct AntiConcRow {
    double eps = 0.0;
    std::size_t hits = 0;
    double frequency = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double bound = 0.0;
};

/// (8e)^k (c* ^ 1)^{-1} eps log(1/eps)^{k-1}.
[[nodiscard]] double anti_conc_bound(int k, double c_star, double eps);

/// Empirical P(|Q_k(U_1..U_n)| <= eps) with U_i ~ Uniform[0, 1], per eps,
/// with 95% Wilson intervals. Every term must have degree k; eps <= 1/e.
[[nodiscard]] std::vector<AntiConcRow> anti_conc_experiment(int k, std::size_t n,
                                                            std::span<const MultilinearTerm> terms,
                                                            std::span<const double> eps_grid,
                                                            std::size_t trials,
                                                            std::uint64_t seed);

}  // namespace toepspec
