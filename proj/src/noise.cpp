#include "toepspec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "toepspec/linalg.hpp"
#include "toepspec/rng.hpp"

namespace toepspec {

namespace {

struct KindName {
    NoiseKind kind;
    const char* name;
};

constexpr std::array<KindName, 6> kKindNames{{
    {NoiseKind::GaussianReal, "gaussian_real"},
    {NoiseKind::GaussianComplex, "gaussian_complex"},
    {NoiseKind::Rademacher, "rademacher"},
    {NoiseKind::SparseBernoulliGaussian, "sparse_bernoulli_gaussian"},
    {NoiseKind::HaarScaled, "haar_scaled"},
    {NoiseKind::CornerDelta, "corner_delta"},
}};

// Stream tags keep kinds with the same seed independent.
constexpr std::uint64_t kEntryStream = 0x656e74;
constexpr std::uint64_t kMaskStream = 0x6d736b;
constexpr std::uint64_t kCornerStream = 0x636f72;

}  // namespace

std::string to_string(NoiseKind kind) {
    for (const auto& kn : kKindNames) {
        if (kn.kind == kind) {
            return kn.name;
        }
    }
    throw std::invalid_argument("unknown noise kind");
}

NoiseKind noise_kind_from_string(const std::string& name) {
    for (const auto& kn : kKindNames) {
        if (name == kn.name) {
            return kn.kind;
        }
    }
    throw std::invalid_argument("unknown noise kind '" + name + "'");
}

void NoiseModel::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("noise: gamma must be positive");
    }
    if (kind == NoiseKind::SparseBernoulliGaussian && !(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("noise: p must lie in (0, 1]");
    }
    if (kind == NoiseKind::CornerDelta && !(gamma_star > 0.0 && std::isfinite(gamma_star))) {
        throw std::invalid_argument("noise: corner_delta needs a positive gamma_star");
    }
}

nlohmann::json NoiseModel::to_json() const {
    nlohmann::json j{{"kind", to_string(kind)}, {"gamma", gamma}};
    if (kind == NoiseKind::SparseBernoulliGaussian) {
        j["p"] = p;
    }
    if (kind == NoiseKind::CornerDelta) {
        j["gamma_star"] = gamma_star;
        j["transpose_support"] = transpose_support;
    }
    return j;
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("noise: expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "kind" && key != "gamma" && key != "p" && key != "gamma_star" &&
            key != "transpose_support") {
            throw std::invalid_argument("noise: unknown field '" + key + "'");
        }
    }
    NoiseModel m;
    try {
        m.kind = noise_kind_from_string(j.at("kind").get<std::string>());
        m.gamma = j.value("gamma", m.gamma);
        m.p = j.value("p", m.p);
        m.gamma_star = j.value("gamma_star", m.gamma_star);
        m.transpose_support = j.value("transpose_support", m.transpose_support);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("noise: ") + e.what());
    }
    m.validate();
    return m;
}

ComplexMatrix sample(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n == 0) {
        throw std::invalid_argument("sample: N must be >= 1");
    }
    const CounterRng rng(derive_seed(seed, kEntryStream));
    ComplexMatrix e(n, n);
    const std::size_t count = n * n;
    auto& out = e.data();
    switch (model.kind) {
        case NoiseKind::GaussianReal:
            for (std::size_t i = 0; i < count; ++i) {
                out[i] = rng.normal(i);
            }
            break;
        case NoiseKind::GaussianComplex:
            for (std::size_t i = 0; i < count; ++i) {
                out[i] = rng.complex_normal(i);
            }
            break;
        case NoiseKind::Rademacher:
            for (std::size_t i = 0; i < count; ++i) {
                out[i] = (rng.bits(i) >> 63) != 0 ? 1.0 : -1.0;
            }
            break;
        case NoiseKind::SparseBernoulliGaussian: {
            const CounterRng mask(derive_seed(seed, kMaskStream));
            const double scale = 1.0 / std::sqrt(model.p);
            for (std::size_t i = 0; i < count; ++i) {
                if (mask.uniform(i) < model.p) {
                    out[i] = scale * rng.complex_normal(i);
                }
            }
            break;
        }
        case NoiseKind::HaarScaled:
            e = haar_unitary(n, seed);
            e *= std::sqrt(static_cast<double>(n));
            break;
        case NoiseKind::CornerDelta:
            throw std::invalid_argument("sample: corner_delta depends on the symbol; use corner_delta");
    }
    return e;
}

std::vector<std::pair<std::size_t, std::size_t>> corner_support(int d1, int d2, std::size_t n,
                                                                bool transpose) {
    if (d1 < 0 || d2 < 0 || d1 + d2 < 1) {
        throw std::invalid_argument("corner_support: need d1, d2 >= 0 and d1 + d2 >= 1");
    }
    if (transpose) {
        std::swap(d1, d2);
    }
    if (n <= static_cast<std::size_t>(std::max(d1, d2))) {
        throw std::invalid_argument("corner_support: N must exceed the corner widths");
    }
    std::vector<std::pair<std::size_t, std::size_t>> support;
    // Lower-left: i - j = N - l, l = 1..d1.
    for (std::size_t i = n - static_cast<std::size_t>(d1); i < n; ++i) {
        for (std::size_t j = 0; j + n - static_cast<std::size_t>(d1) <= i; ++j) {
            support.emplace_back(i, j);
        }
    }
    // Upper-right: j - i = N - l, l = 1..d2.
    for (std::size_t i = 0; i < static_cast<std::size_t>(d2); ++i) {
        for (std::size_t j = n - static_cast<std::size_t>(d2) + i; j < n; ++j) {
            support.emplace_back(i, j);
        }
    }
    std::sort(support.begin(), support.end());
    return support;
}

ComplexMatrix corner_delta(const Symbol& s, std::size_t n, double gamma_star, std::uint64_t seed,
                           bool transpose) {
    if (!(gamma_star > static_cast<double>(s.degree()))) {
        throw std::invalid_argument("corner_delta: gamma_star must exceed d");
    }
    const CounterRng rng(derive_seed(seed, kCornerStream));
    const double scale = std::pow(static_cast<double>(n), -gamma_star);
    ComplexMatrix delta(n, n);
    for (const auto& [i, j] : corner_support(s.d1(), s.d2(), n, transpose)) {
        delta(i, j) = scale * (0.5 + 0.5 * rng.uniform(i * n + j));
    }
    return delta;
}

ComplexMatrix perturbation(const NoiseModel& model, const Symbol& s, std::size_t n,
                           std::uint64_t seed) {
    if (model.kind == NoiseKind::CornerDelta) {
        model.validate();
        return corner_delta(s, n, model.gamma_star, seed, model.transpose_support);
    }
    ComplexMatrix e = sample(model, n, seed);
    e *= std::pow(static_cast<double>(n), -model.gamma);
    return e;
}

SminTailReport smin_tail_check(const NoiseModel& model, const ComplexMatrix& m,
                               std::size_t trials, std::uint64_t seed) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("smin_tail_check: M must be square and nonempty");
    }
    if (trials == 0) {
        throw std::invalid_argument("smin_tail_check: trials must be >= 1");
    }
    const std::size_t n = m.rows();
    SminTailReport report;
    report.smin.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        ComplexMatrix a = sample(model, n, derive_seed(seed, t));
        a += m;
        report.smin.push_back(smin(a));
    }
    for (std::size_t b = 0; b < SminTailReport::kBetas.size(); ++b) {
        const double threshold = std::pow(static_cast<double>(n), -SminTailReport::kBetas[b]);
        const auto below = std::count_if(report.smin.begin(), report.smin.end(),
                                         [&](double v) { return v <= threshold; });
        report.fraction_below[b] = static_cast<double>(below) / static_cast<double>(trials);
    }
    return report;
}

}  // namespace toepspec
