#include "toepspec/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "toepspec/rng.hpp"

namespace toepspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("symbol: coefficient must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

struct HornerValue {
    Complex p;
    Complex dp;
    double scale;  // sum_j |c_j| |x|^j, the rounding-error scale of p
};

HornerValue horner(std::span<const Complex> c, Complex x) {
    const double ax = std::abs(x);
    Complex p = c.back();
    Complex dp = 0.0;
    double scale = std::abs(c.back());
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[j];
        scale = scale * ax + std::abs(c[j]);
    }
    return {p, dp, scale};
}

}  // namespace

Symbol::Symbol(int d1, int d2, std::vector<Complex> coeffs)
    : d1_(d1), d2_(d2), coeffs_(std::move(coeffs)) {
    if (d1_ < 0 || d2_ < 0) {
        throw std::invalid_argument("symbol: d1 and d2 must be nonnegative");
    }
    if (d1_ + d2_ < 1) {
        throw std::invalid_argument("symbol: constant symbols are not supported (d1 + d2 >= 1)");
    }
    if (coeffs_.size() != static_cast<std::size_t>(d1_ + d2_ + 1)) {
        throw std::invalid_argument("symbol: expected d1 + d2 + 1 coefficients");
    }
    for (const auto& c : coeffs_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("symbol: non-finite coefficient");
        }
    }
    if (coeffs_.back() == Complex{}) {
        throw std::invalid_argument("symbol: leading coefficient a_{d1} must be nonzero");
    }
    if (d2_ > 0 && coeffs_.front() == Complex{}) {
        throw std::invalid_argument("symbol: trailing coefficient a_{-d2} must be nonzero");
    }
}

Complex Symbol::coeff(int k) const noexcept {
    if (k < -d2_ || k > d1_) {
        return 0.0;
    }
    return coeffs_[static_cast<std::size_t>(k + d2_)];
}

Complex Symbol::eval(Complex lambda) const {
    if (d2_ > 0 && lambda == Complex{}) {
        throw std::domain_error("symbol: evaluation at 0 with negative powers");
    }
    Complex sum = 0.0;
    for (int k = -d2_; k <= d1_; ++k) {
        sum += coeff(k) * std::pow(lambda, k);
    }
    return sum;
}

std::vector<Complex> Symbol::char_poly(Complex z) const {
    std::vector<Complex> c = coeffs_;
    c[static_cast<std::size_t>(d2_)] -= z;
    return c;
}

Symbol Symbol::scaled(Complex c) const {
    std::vector<Complex> out = coeffs_;
    for (auto& v : out) {
        v *= c;
    }
    return {d1_, d2_, std::move(out)};
}

nlohmann::json Symbol::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : coeffs_) {
        coeffs.push_back({c.real(), c.imag()});
    }
    return {{"d1", d1_}, {"d2", d2_}, {"coeffs", coeffs}};
}

Symbol Symbol::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("d1") || !j.contains("d2") || !j.contains("coeffs")) {
        throw std::invalid_argument("symbol: expected {\"d1\",\"d2\",\"coeffs\"}");
    }
    if (!j.at("d1").is_number_integer() || !j.at("d2").is_number_integer()) {
        throw std::invalid_argument("symbol: d1 and d2 must be integers");
    }
    const auto& arr = j.at("coeffs");
    if (!arr.is_array()) {
        throw std::invalid_argument("symbol: coeffs must be an array");
    }
    std::vector<Complex> coeffs;
    coeffs.reserve(arr.size());
    for (const auto& c : arr) {
        coeffs.push_back(complex_from_json(c));
    }
    return {j.at("d1").get<int>(), j.at("d2").get<int>(), std::move(coeffs)};
}

Symbol Symbol::parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("symbol: ") + e.what());
    }
    return from_json(j);
}

AberthResult aberth_roots(std::span<const Complex> coeffs) {
    std::size_t lo = 0;
    while (lo < coeffs.size() && coeffs[lo] == Complex{}) {
        ++lo;
    }
    std::size_t hi = coeffs.size();
    while (hi > lo && coeffs[hi - 1] == Complex{}) {
        --hi;
    }
    if (hi <= lo) {
        throw std::invalid_argument("aberth_roots: zero polynomial");
    }
    AberthResult result;
    // Exact zero roots from vanishing low-order coefficients.
    result.roots.assign(lo, Complex{});
    const std::span<const Complex> c = coeffs.subspan(lo, hi - lo);
    const std::size_t d = c.size() - 1;
    if (d == 0) {
        return result;
    }
    if (d == 1) {
        result.roots.push_back(-c[0] / c[1]);
        return result;
    }

    double radius = std::pow(std::abs(c.front()) / std::abs(c.back()), 1.0 / static_cast<double>(d));
    if (!std::isfinite(radius) || radius == 0.0) {
        radius = 1.0;
    }
    std::vector<Complex> x(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d) + 0.4;
        x[k] = std::polar(radius, angle);
    }

    std::vector<bool> settled(d, false);
    const double floor_tol = 4.0 * static_cast<double>(d) * kEps;
    int it = 0;
    for (; it < kAberthMaxIter; ++it) {
        bool all_settled = true;
        for (std::size_t k = 0; k < d; ++k) {
            if (settled[k]) {
                continue;
            }
            const HornerValue hv = horner(c, x[k]);
            if (std::abs(hv.p) <= floor_tol * hv.scale) {
                settled[k] = true;
                continue;
            }
            all_settled = false;
            Complex ratio = hv.dp == Complex{} ? Complex{1e-8 * (1.0 + std::abs(x[k]))}
                                               : hv.p / hv.dp;
            Complex repulsion = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j != k) {
                    const Complex gap = x[k] - x[j];
                    if (gap != Complex{}) {
                        repulsion += 1.0 / gap;
                    }
                }
            }
            const Complex denom = 1.0 - ratio * repulsion;
            const Complex step = denom == Complex{} ? ratio : ratio / denom;
            x[k] -= step;
            if (std::abs(step) <= kEps * std::abs(x[k])) {
                settled[k] = true;
            }
        }
        if (all_settled) {
            break;
        }
    }
    for (std::size_t k = 0; k < d; ++k) {
        const HornerValue hv = horner(c, x[k]);
        if (!(std::abs(hv.p) <= kRootResidualTol * hv.scale)) {
            throw ConvergenceError("aberth_roots: no convergence after " +
                                   std::to_string(kAberthMaxIter) + " iterations");
        }
    }
    result.iterations = it;
    result.roots.insert(result.roots.end(), x.begin(), x.end());
    return result;
}

void sort_by_modulus(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(),
              [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
    // Regroup runs of (numerically) equal modulus.
    std::size_t start = 0;
    while (start < values.size()) {
        const double m = std::abs(values[start]);
        std::size_t end = start + 1;
        while (end < values.size() &&
               std::abs(m - std::abs(values[end])) <= 1e-12 * std::max(1.0, m)) {
            ++end;
        }
        std::sort(values.begin() + static_cast<std::ptrdiff_t>(start),
                  values.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Complex& a, const Complex& b) {
                      if (a.real() != b.real()) {
                          return a.real() > b.real();
                      }
                      return a.imag() > b.imag();
                  });
        start = end;
    }
}

RootProfile root_profile(const Symbol& s, Complex z) {
    const auto poly = s.char_poly(z);
    AberthResult found = aberth_roots(poly);
    RootProfile profile;
    profile.z = z;
    profile.iterations = found.iterations;
    profile.roots.reserve(found.roots.size());
    for (const auto& r : found.roots) {
        profile.roots.push_back(-r);
    }
    sort_by_modulus(profile.roots);

    double closest = std::numeric_limits<double>::infinity();
    for (const auto& r : profile.roots) {
        const double m = std::abs(r);
        if (m >= 1.0) {
            ++profile.d0;
        }
        closest = std::min(closest, std::abs(m - 1.0));
    }
    profile.defect = s.d1() - profile.d0;
    profile.boundary = closest < kBoundaryTol;
    for (std::size_t i = 0; i < profile.roots.size(); ++i) {
        for (std::size_t j = i + 1; j < profile.roots.size(); ++j) {
            if (std::abs(profile.roots[i] - profile.roots[j]) < kDoubleRootSeparation) {
                profile.near_double_root = true;
            }
        }
    }
    return profile;
}

RegionLabel classify_region(const RootProfile& profile, int d1) {
    const auto& r = profile.roots;
    const int d = static_cast<int>(r.size());
    const int d0 = profile.d0;
    const double above = d0 == 0 ? std::numeric_limits<double>::infinity()
                                 : std::abs(r[static_cast<std::size_t>(d0 - 1)]);
    const double below = d0 == d ? 0.0 : std::abs(r[static_cast<std::size_t>(d0)]);
    if (above > 1.0 + kBoundaryTol && below < 1.0 - kBoundaryTol) {
        return RegionLabel::region(d1 - d0, d0);
    }
    return RegionLabel::boundary();
}

RegionLabel classify_region(const Symbol& s, Complex z) {
    return classify_region(root_profile(s, z), s.d1());
}

std::string RegionLabel::to_string() const {
    if (is_boundary()) {
        return "BOUNDARY";
    }
    return "R" + std::to_string(outside());
}

double limit_logpot(const Symbol& s, Complex z) {
    const RootProfile profile = root_profile(s, z);
    double sum = std::log(std::abs(s.coeff(s.d1())));
    for (const auto& r : profile.roots) {
        sum += std::max(std::log(std::abs(r)), 0.0);
    }
    return sum;
}

MuASample sample_mu_a(const Symbol& s, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_mu_a: n must be >= 1");
    }
    const CounterRng rng(derive_seed(seed, 0x6d75ULL));
    MuASample out;
    out.seed = seed;
    out.points.reserve(n);
    out.angles.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double theta = 2.0 * std::numbers::pi * rng.uniform(j);
        out.angles.push_back(theta);
        out.points.push_back(s.eval(std::polar(1.0, theta)));
    }
    return out;
}

}  // namespace toepspec
