#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "toepspec/matrix.hpp"
#include "toepspec/noise.hpp"
#include "toepspec/symbol.hpp"

namespace toepspec {

/// [re_min, re_max, im_min, im_max].
using Rect = std::array<double, 4>;

/// Either a resolution x resolution lattice over a rectangle, or explicit points.
struct ZGrid {
    std::optional<Rect> rect;
    std::size_t resolution = 0;
    std::vector<Complex> points;

    /// Lattice nodes row by row (imaginary part descending), or `points`.
    [[nodiscard]] std::vector<Complex> nodes() const;
};

struct OutputSpec {
    std::string dir = "out";
    std::string format = "csv";  // csv | jsonl
    bool svg = false;
};

struct ExperimentConfig {
    Symbol symbol{1, 0, {0.0, 1.0}};
    std::vector<std::size_t> sizes{100};
    double gamma = 0.75;
    NoiseModel noise;
    std::size_t trials = 1;
    ZGrid z_grid;
    std::size_t mu_samples = 10000;
    std::uint64_t seed = 1;
    OutputSpec outputs;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    /// Canonical form; `noise.gamma` always mirrors `gamma`.
    [[nodiscard]] nlohmann::json to_json() const;
    /// Unknown fields are rejected. A top-level "gamma" wins over noise.gamma.
    [[nodiscard]] static ExperimentConfig from_json(const nlohmann::json& j);
};

/// FNV-1a 64 of the canonical JSON dump, without the output settings.
[[nodiscard]] std::uint64_t config_hash(const ExperimentConfig& config);

struct EsdTrial {
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<Complex> eigenvalues;
    bool converged = false;
    double energy = 0.0;  // energy distance to the mu_a sample
};

struct EsdSizeSummary {
    std::size_t n = 0;
    double median_energy = 0.0;
    std::size_t failures = 0;  // trials whose eigensolve did not converge
};

struct EsdArtifact {
    std::uint64_t config_hash = 0;
    MuASample mu;
    std::vector<EsdTrial> trials;  // ordered by (size index, trial)
    std::vector<EsdSizeSummary> sizes;
};

/// Eigenvalues of T_N + perturbation per (N, trial), each compared with a
/// mu_a sample of size mu_samples by energy distance.
[[nodiscard]] EsdArtifact run_esd(const ExperimentConfig& config);

struct RegionMap {
    Rect rect{};
    std::size_t resolution = 0;
    std::vector<Complex> nodes;  // as ZGrid::nodes
    std::vector<RegionLabel> labels;
};

[[nodiscard]] RegionMap run_region_map(const Symbol& s, const Rect& rect, std::size_t resolution);

struct LogpotRow {
    Complex z;
    std::size_t n = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double value = 0.0;  // (1/N) log|det(T_N(z) + perturbation)|, or kLogZero
    double limit = 0.0;
    bool singular = false;
};

struct LogpotSummary {
    Complex z;
    std::size_t n = 0;
    double median = 0.0;
    double limit = 0.0;
};

struct LogpotTable {
    std::uint64_t config_hash = 0;
    std::vector<LogpotRow> rows;
    std::vector<LogpotSummary> summaries;  // ordered by (z, N)
};

/// Rejects BOUNDARY points in z_list.
[[nodiscard]] LogpotTable run_logpot(const ExperimentConfig& config,
                                     std::span<const Complex> z_list);

struct StieltjesRow {
    std::size_t trial = 0;
    Complex xi;
    double diff = 0.0;   // |G_A(xi) - G_B(xi)|
    double bound = 0.0;  // ||C - D||_HS / (sqrt(N) (Im xi)^2)
};

struct ReplacementRecord {
    Complex z;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::vector<double> singular_a;  // pooled over trials
    std::vector<double> singular_b;
    double ks = 0.0;
    std::vector<StieltjesRow> grid;
    bool bound_holds = true;
};

/// Singular values of T_N(z) + perturbation under two noise models with
/// shared trial seeds; Stieltjes differences on Im xi in {0.5, 1, 2} and 21
/// real parts spanning +-s_max.
[[nodiscard]] ReplacementRecord run_replacement(const Symbol& s, Complex z, std::size_t n,
                                                const NoiseModel& model_a,
                                                const NoiseModel& model_b, std::size_t trials,
                                                std::uint64_t seed);

struct IntervalMass {
    double mass = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

/// Mass of [a, b] under the symmetrized singular-value measure
/// (1/2N) sum_j (delta_{s_j} + delta_{-s_j}), bracketed by
///   int_{a-rho}^{b+rho} (1/pi)|Im G(x + i tau)| dx + tau/rho   and
///   int_{a+rho}^{b-rho} (1/pi)|Im G(x + i tau)| dx - tau/rho.
[[nodiscard]] IntervalMass interval_mass_check(std::span<const double> singular_values, double a,
                                               double b, double tau, double rho);

/// Adaptive Simpson on [a, b], split first into `panels` pieces.
[[nodiscard]] double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                      double tol, int panels = 64);

}  // namespace toepspec
