#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toepspec/matrix.hpp"
#include "toepspec/symbol.hpp"

namespace toepspec {

enum class NoiseKind {
    GaussianReal,
    GaussianComplex,
    Rademacher,
    SparseBernoulliGaussian,
    HaarScaled,
    CornerDelta,
};

[[nodiscard]] std::string to_string(NoiseKind kind);
[[nodiscard]] NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseModel {
    NoiseKind kind = NoiseKind::GaussianComplex;
    double gamma = 0.75;             // perturbation is N^{-gamma} E
    double p = 1.0;                  // SparseBernoulliGaussian only
    double gamma_star = 0.0;         // CornerDelta only; must exceed d
    bool transpose_support = false;  // CornerDelta only

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static NoiseModel from_json(const nlohmann::json& j);

    bool operator==(const NoiseModel&) const = default;
};

/// Unscaled E_N. Entries have unit variance (complex kinds split it 1/2 + 1/2);
/// sparse entries are Bernoulli(p) * complex Gaussian / sqrt(p).
/// CornerDelta needs a symbol; use corner_delta.
[[nodiscard]] ComplexMatrix sample(const NoiseModel& model, std::size_t n, std::uint64_t seed);

/// 0-based positions of the corner support: lower-left i - j >= N - d1,
/// upper-right j - i >= N - d2. `transpose` swaps the two widths.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> corner_support(
    int d1, int d2, std::size_t n, bool transpose = false);

/// N^{-gamma*} delta_ij on the corner support, delta_ij ~ Uniform[1/2, 1].
[[nodiscard]] ComplexMatrix corner_delta(const Symbol& s, std::size_t n, double gamma_star,
                                         std::uint64_t seed, bool transpose = false);

/// The additive perturbation for `model`: N^{-gamma} sample(...), or the
/// corner matrix for CornerDelta.
[[nodiscard]] ComplexMatrix perturbation(const NoiseModel& model, const Symbol& s, std::size_t n,
                                         std::uint64_t seed);

struct SminTailReport {
    static constexpr std::array<double, 3> kBetas{1.0, 2.0, 4.0};
    std::vector<double> smin;
    std::array<double, 3> fraction_below{};  // P(smin <= N^{-beta}) per kBetas
};

/// smin(sample(model, N, seed_t) + m) over `trials` derived seeds.
[[nodiscard]] SminTailReport smin_tail_check(const NoiseModel& model, const ComplexMatrix& m,
                                             std::size_t trials, std::uint64_t seed);

}  // namespace toepspec
