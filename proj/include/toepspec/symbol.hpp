#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "toepspec/errors.hpp"
#include "toepspec/matrix.hpp"

namespace toepspec {

inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kDoubleRootSeparation = 1e-7;
inline constexpr int kAberthMaxIter = 200;
inline constexpr double kRootResidualTol = 1e-12;

/// Laurent polynomial a(lambda) = sum_{k=-d2}^{d1} a_k lambda^k.
class Symbol {
public:
    /// `coeffs` lists a_{-d2}, ..., a_{d1}.
    Symbol(int d1, int d2, std::vector<Complex> coeffs);

    [[nodiscard]] int d1() const noexcept { return d1_; }
    [[nodiscard]] int d2() const noexcept { return d2_; }
    [[nodiscard]] int degree() const noexcept { return d1_ + d2_; }

    /// a_k, zero outside [-d2, d1].
    [[nodiscard]] Complex coeff(int k) const noexcept;
    [[nodiscard]] const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }

    [[nodiscard]] Complex eval(Complex lambda) const;

    /// Coefficients c_0..c_d of P_z(lambda) = (a(lambda) - z) lambda^{d2}.
    [[nodiscard]] std::vector<Complex> char_poly(Complex z) const;

    [[nodiscard]] Symbol scaled(Complex c) const;

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static Symbol from_json(const nlohmann::json& j);
    [[nodiscard]] static Symbol parse(const std::string& text);

    bool operator==(const Symbol&) const = default;

private:
    int d1_;
    int d2_;
    std::vector<Complex> coeffs_;
};

/// The d = d1 + d2 values lambda_l(z), i.e. the negated roots of P_z.
struct RootProfile {
    Complex z;
    std::vector<Complex> roots;  // nonincreasing modulus
    int d0 = 0;                  // roots with modulus >= 1
    int defect = 0;              // d1 - d0
    bool boundary = false;       // some root modulus within kBoundaryTol of 1
    bool near_double_root = false;
    int iterations = 0;
};

/// Region label: the defect d1 - d0(z), or BOUNDARY when a root modulus is
/// too close to 1 to decide.
class RegionLabel {
public:
    [[nodiscard]] static RegionLabel boundary() noexcept { return RegionLabel{}; }
    [[nodiscard]] static RegionLabel region(int defect, int outside) noexcept {
        RegionLabel r;
        r.defect_ = defect;
        r.outside_ = outside;
        return r;
    }

    [[nodiscard]] bool is_boundary() const noexcept { return !defect_.has_value(); }
    [[nodiscard]] int defect() const { return defect_.value(); }
    /// Number of roots outside the unit disk; the l in R_l.
    [[nodiscard]] int outside() const { return outside_.value(); }
    [[nodiscard]] std::string to_string() const;

    bool operator==(const RegionLabel&) const = default;

private:
    std::optional<int> defect_;
    std::optional<int> outside_;
};

struct MuASample {
    std::vector<Complex> points;  // a(U_j)
    std::vector<double> angles;   // arg U_j in [0, 2pi)
    std::uint64_t seed = 0;
};

/// Simultaneous Aberth-Ehrlich iteration for all roots of
/// sum_j coeffs[j] x^j. Throws ConvergenceError after kAberthMaxIter sweeps.
struct AberthResult {
    std::vector<Complex> roots;
    int iterations = 0;
};
[[nodiscard]] AberthResult aberth_roots(std::span<const Complex> coeffs);

/// Sort by nonincreasing modulus; near-equal moduli ordered by descending
/// real part, then descending imaginary part.
void sort_by_modulus(std::vector<Complex>& values);

[[nodiscard]] RootProfile root_profile(const Symbol& s, Complex z);
[[nodiscard]] RegionLabel classify_region(const RootProfile& profile, int d1);
[[nodiscard]] RegionLabel classify_region(const Symbol& s, Complex z);

/// log|a_{d1}| + sum_k log_+ |lambda_k(z)|.
[[nodiscard]] double limit_logpot(const Symbol& s, Complex z);

[[nodiscard]] MuASample sample_mu_a(const Symbol& s, std::size_t n, std::uint64_t seed);

}  // namespace toepspec
