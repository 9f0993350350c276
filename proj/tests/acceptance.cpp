// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "toepspec/expansion.hpp"
#include "toepspec/harness.hpp"
#include "toepspec/linalg.hpp"
#include "toepspec/noise.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/stats.hpp"
#include "toepspec/symbol.hpp"
#include "toepspec/toeplitz.hpp"

using namespace toepspec;

namespace {

const Symbol kQuad(2, 0, {0.0, 1.0, 1.0});
const Symbol kTri(1, 1, {1.0, 0.0, 1.0});
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool passed = false;
    std::string detail;
};

class Detail {
public:
    template <typename T>
    Detail& operator()(const std::string& key, const T& value) {
        os_ << (first_ ? "" : " ") << key << '=' << value;
        first_ = false;
        return *this;
    }
    [[nodiscard]] std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
    bool first_ = true;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ComplexMatrix random_matrix(std::size_t n, const CounterRng& rng, std::uint64_t offset,
                            double zero_fraction) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) {
        if (rng.uniform(offset + 2 * i) >= zero_fraction) {
            m.data()[i] = rng.complex_normal(offset + 2 * i + 1);
        }
    }
    return m;
}

Subset from_mask(unsigned mask, std::size_t n) {
    Subset s;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1U << i)) {
            s.push_back(i);
        }
    }
    return s;
}

double rel_err(Complex got, Complex ref) {
    return std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
}

Outcome kernel_validation() {
    constexpr std::size_t n = 100;
    const auto start = std::chrono::steady_clock::now();
    const SpectrumResult r = eigenvalues(build(kTri, n));
    std::vector<double> ev;
    for (const auto& e : r.eigenvalues) {
        ev.push_back(e.real());
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    double err = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        err = std::max(err, std::abs(ev[k - 1] - 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi /
                                                                static_cast<double>(n + 1))));
    }
    for (const auto& e : r.eigenvalues) {
        err = std::max(err, std::abs(e.imag()));
    }
    const double t = elapsed_since(start);
    return {r.converged && err < 1e-8 && t < 1.0, Detail()("max_err", err)("seconds", t).str()};
}

Outcome appendix_identities() {
    const auto start = std::chrono::steady_clock::now();
    const CounterRng rng(derive_seed(kSeed, 2));
    double worst_sum = 0.0;
    double worst_bidiag = 0.0;
    std::size_t cases = 0;
    // exhaustive over (X, Y) for the bidiagonal closed form
    const Complex zeta{0.8, -0.35};
    for (std::size_t n = 1; n <= 5; ++n) {
        ComplexMatrix a = jordan(n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = zeta;
        }
        for (unsigned xm = 0; xm < (1U << n); ++xm) {
            for (unsigned ym = 0; ym < (1U << n); ++ym) {
                if (std::popcount(xm) != std::popcount(ym)) {
                    continue;
                }
                const Subset x = from_mask(xm, n);
                const Subset y = from_mask(ym, n);
                const Complex ref = oracle::cofactor_det(oracle::drop(a, x, y));
                const Complex got = bidiag_subdet(zeta, x, y, n);
                worst_bidiag = std::max(worst_bidiag, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
                ++cases;
            }
        }
    }
    // exhaustive over single-entry and full-support B for N <= 5
    for (std::size_t n = 1; n <= 5; ++n) {
        const ComplexMatrix a = random_matrix(n, rng, 100000 * n, 0.0);
        for (std::size_t idx = 0; idx <= n * n; ++idx) {
            ComplexMatrix b = random_matrix(n, rng, 100000 * n + 1000 * (idx + 1), 0.0);
            if (idx < n * n) {
                const Complex keep = b.data()[idx];
                b = ComplexMatrix(n, n);
                b.data()[idx] = keep;
            }
            const Complex ref = oracle::cofactor_det(a + b);
            worst_sum = std::max(worst_sum, rel_err(det_sum_decomposition(a, b), ref));
            ++cases;
        }
    }
    // 200 random cases, N <= 6, alternating sparse and dense B
    for (std::uint64_t t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 6;
        const ComplexMatrix a = random_matrix(n, rng, 10000000 + 1000 * t, 0.0);
        const ComplexMatrix b = random_matrix(n, rng, 20000000 + 1000 * t, t % 2 == 0 ? 0.7 : 0.0);
        const Complex ref = oracle::cofactor_det(a + b);
        worst_sum = std::max(worst_sum, rel_err(det_sum_decomposition(a, b), ref));
        ++cases;
    }
    const double t = elapsed_since(start);
    return {worst_sum < 1e-9 && worst_bidiag < 1e-9 && t < 10.0,
            Detail()("cases", cases)("det_sum_rel", worst_sum)("bidiag_rel", worst_bidiag)("seconds", t)
                .str()};
}

Outcome widom_consistency() {
    const auto start = std::chrono::steady_clock::now();
    const CounterRng rng(derive_seed(kSeed, 3));
    constexpr std::size_t n = 30;
    double worst = 0.0;
    std::size_t points = 0;
    for (const Symbol* s : {&kQuad, &kTri}) {
        std::size_t found = 0;
        for (std::uint64_t i = 0; found < 20; ++i) {
            const Complex z{-3.0 + 6.0 * rng.uniform(2 * i + 1000 * found + (s == &kTri ? 7 : 0)),
                            -3.0 + 6.0 * rng.uniform(2 * i + 1 + 1000 * found + (s == &kTri ? 7 : 0))};
            const RootProfile p = root_profile(*s, z);
            if (p.boundary || p.near_double_root) {
                continue;
            }
            const double w = widom_sum(*s, z, n).log_abs;
            const double l = lu_logdet(build_z(*s, z, n)).log_abs;
            worst = std::max(worst, std::abs(w - l) / static_cast<double>(n));
            ++found;
        }
        points += found;
    }
    const double t = elapsed_since(start);
    return {worst < 1e-8 && t < 5.0, Detail()("points", points)("max_gap_per_N", worst)("seconds", t).str()};
}

Outcome moment_identity() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::size_t n = 1000;
    const int d = kQuad.degree();
    bool ok = true;
    Detail detail;
    for (const Complex z : {Complex{0.0, 0.0}, Complex{1.0, 1.0}}) {
        for (int k = 1; k <= 3; ++k) {
            const double gap = std::abs(moment_lhs(kQuad, z, k, n) - moment_rhs(kQuad, z, k));
            const double tol = 10.0 * k * d / static_cast<double>(n);
            std::ostringstream key;
            key << "z=" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i,k=" << k;
            detail(key.str(), gap);
            if (!(gap < tol)) {
                ok = false;
                detail("tol", tol)("exceeded", "yes");
            }
        }
    }
    const double t = elapsed_since(start);
    detail("seconds", t);
    return {ok && t < 30.0, detail.str()};
}

int companion_outside(const Symbol& s, Complex z) {
    const auto c = s.char_poly(z);
    const std::size_t d = c.size() - 1;
    ComplexMatrix comp(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        comp(0, j) = -c[d - 1 - j] / c[d];
    }
    for (std::size_t i = 1; i < d; ++i) {
        comp(i, i - 1) = 1.0;
    }
    int outside = 0;
    for (const auto& r : eigenvalues(comp).eigenvalues) {
        outside += std::abs(r) > 1.0 ? 1 : 0;
    }
    return outside;
}

Outcome region_map() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::size_t res = 200;
    const RegionMap map = run_region_map(kQuad, {-2.5, 3.5, -3.0, 3.0}, res);
    std::set<int> seen;
    std::size_t boundary = 0;
    for (const auto& l : map.labels) {
        if (l.is_boundary()) {
            ++boundary;
        } else {
            seen.insert(l.outside());
        }
    }
    const bool three_regions = seen == std::set<int>{0, 1, 2};

    const auto nearest = [&](Complex z) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < map.nodes.size(); ++i) {
            if (std::abs(map.nodes[i] - z) < std::abs(map.nodes[best] - z)) {
                best = i;
            }
        }
        return map.labels[best];
    };
    bool spots = true;
    const std::vector<std::pair<Complex, int>> expected{{-0.1, 0}, {1.0, 1}, {3.0, 2}};
    for (const auto& [z, l] : expected) {
        spots = spots && classify_region(kQuad, z) == RegionLabel::region(2 - l, l) &&
                nearest(z) == RegionLabel::region(2 - l, l);
    }

    const CounterRng rng(derive_seed(kSeed, 5));
    std::size_t checked = 0;
    std::size_t agree = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const std::size_t idx = rng.bits(i) % map.nodes.size();
        if (map.labels[idx].is_boundary()) {
            continue;
        }
        ++checked;
        agree += companion_outside(kQuad, map.nodes[idx]) == map.labels[idx].outside() ? 1 : 0;
    }
    const double t = elapsed_since(start);
    return {three_regions && spots && agree == checked && t < 30.0,
            Detail()("labels_seen", seen.size())("boundary_nodes", boundary)("spot_values_ok", spots)(
                "companion_agree", agree)("checked", checked)("seconds", t)
                .str()};
}

Outcome esd_convergence() {
    bool ok = true;
    Detail detail;
    for (const NoiseKind kind : {NoiseKind::GaussianComplex, NoiseKind::Rademacher}) {
        const auto start = std::chrono::steady_clock::now();
        ExperimentConfig c;
        c.symbol = kQuad;
        c.sizes = {100, 200, 400};
        c.gamma = 0.75;
        c.noise.kind = kind;
        c.noise.gamma = 0.75;
        c.trials = 10;
        c.mu_samples = 10000;
        c.seed = derive_seed(kSeed, 6);
        const EsdArtifact art = run_esd(c);
        const double t = elapsed_since(start);
        std::size_t failures = 0;
        for (std::size_t i = 0; i < art.sizes.size(); ++i) {
            failures += art.sizes[i].failures;
            if (i > 0 && !(art.sizes[i].median_energy < art.sizes[i - 1].median_energy)) {
                ok = false;
            }
            detail(to_string(kind) + ":N=" + std::to_string(art.sizes[i].n), art.sizes[i].median_energy);
        }
        ok = ok && art.sizes.back().median_energy < 0.08 && failures == 0 && t < 600.0;
        detail(to_string(kind) + ":seconds", t);
    }
    return {ok, detail.str()};
}

Outcome log_potential() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Complex> zs{{3.0, 0.0}, {1.0, 0.0}, {-0.1, 0.0}};
    const std::vector<double> limits{std::log(3.0), 0.48121182505960347, 0.0};
    bool ok = true;
    Detail detail;
    for (const NoiseKind kind : {NoiseKind::GaussianComplex, NoiseKind::CornerDelta}) {
        ExperimentConfig c;
        c.symbol = kQuad;
        c.sizes = {500};
        c.gamma = 0.75;
        c.noise.kind = kind;
        c.noise.gamma = 0.75;
        c.noise.gamma_star = kQuad.degree() + 1;
        c.trials = 10;
        c.seed = derive_seed(kSeed, 7);
        const LogpotTable table = run_logpot(c, zs);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const auto& s = table.summaries[i];
            const double gap = std::abs(s.median - s.limit);
            ok = ok && gap < 0.05 && std::abs(s.limit - limits[i]) < 1e-9;
            std::ostringstream key;
            key << to_string(kind) << ":z=" << zs[i].real();
            detail(key.str(), gap);
        }
    }
    const double t = elapsed_since(start);
    detail("seconds", t);
    return {ok && t < 300.0, detail.str()};
}

Outcome dominance() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::size_t draws = 100;
    const std::vector<std::size_t> sizes{10, 20, 40};
    const double gamma_star = kQuad.degree() + 1;
    Detail detail;

    std::vector<double> above;
    std::vector<double> log_below;
    std::size_t worst_hits = draws;
    for (const std::size_t n : sizes) {
        std::vector<double> ratio;
        std::vector<double> below;
        std::size_t hits = 0;
        for (std::size_t t = 0; t < draws; ++t) {
            const ComplexMatrix delta = corner_delta(kQuad, n, gamma_star, derive_seed(kSeed, 8, n * 1000 + t));
            ratio.push_back(dominance_report(kQuad, 3.0, delta).ratio_above);
            below.push_back(dominance_report(kQuad, -0.1, delta).ratio_below);
            const double pd = dominance_report(kQuad, 1.0, delta).normalized_pd;
            hits += pd >= std::pow(static_cast<double>(n), -gamma_star - 1.0) ? 1 : 0;
        }
        above.push_back(median(ratio));
        log_below.push_back(std::log(median(below)));
        worst_hits = std::min(worst_hits, hits);
        detail("N=" + std::to_string(n) + ":z=3_median_ratio", above.back())(
            "N=" + std::to_string(n) + ":z=-0.1_median_lower", median(below))(
            "N=" + std::to_string(n) + ":z=1_hits", hits);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < above.size(); ++i) {
        decreasing = decreasing && above[i] < above[i - 1];
    }
    // least-squares slope of log(lower-order mass) against N
    double mean_n = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        mean_n += static_cast<double>(sizes[i]);
        mean_y += log_below[i];
    }
    mean_n /= static_cast<double>(sizes.size());
    mean_y /= static_cast<double>(sizes.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const double dx = static_cast<double>(sizes[i]) - mean_n;
        sxy += dx * (log_below[i] - mean_y);
        sxx += dx * dx;
    }
    const double rate = sxy / sxx;
    const double t = elapsed_since(start);
    detail("z=-0.1_rate", rate)("seconds", t);
    return {decreasing && rate < 0.0 && worst_hits >= 95 && t < 300.0, detail.str()};
}

Outcome anti_concentration() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<MultilinearTerm> q{{1.0, {0, 1}}, {-1.0, {2, 3}}};
    const std::vector<double> eps{1e-3, 1e-2, 1e-1};
    const auto rows = anti_conc_experiment(2, 4, q, eps, 100000, derive_seed(kSeed, 9));
    bool ok = true;
    Detail detail;
    for (const auto& r : rows) {
        const double bound = std::pow(8.0 * std::numbers::e, 2) * r.eps * std::log(1.0 / r.eps);
        ok = ok && r.frequency <= bound;
        std::ostringstream key;
        key << "eps=" << r.eps;
        detail(key.str() + ":freq", r.frequency)(key.str() + ":bound", bound);
    }
    const double t = elapsed_since(start);
    detail("seconds", t);
    return {ok && t < 60.0, detail.str()};
}

Outcome replacement() {
    const auto start = std::chrono::steady_clock::now();
    constexpr std::size_t n = 300;
    const Complex z = 1.0;
    NoiseModel gauss;
    gauss.gamma = 0.75;
    NoiseModel rad = gauss;
    rad.kind = NoiseKind::Rademacher;
    const ReplacementRecord rec = run_replacement(kQuad, z, n, gauss, rad, 5, derive_seed(kSeed, 10));

    // smallest singular value of E + N^gamma (T_N - z), the unscaled form of T_N - z + N^{-gamma} E
    ComplexMatrix shift = build_z(kQuad, z, n);
    shift *= std::pow(static_cast<double>(n), gauss.gamma);
    const SminTailReport tail = smin_tail_check(gauss, shift, 200, derive_seed(kSeed, 11));
    const std::size_t below = static_cast<std::size_t>(std::lround(tail.fraction_below[2] * 200.0));
    const double t = elapsed_since(start);
    return {rec.ks < 0.1 && rec.bound_holds && below == 0 && t < 300.0,
            Detail()("ks", rec.ks)("stieltjes_bound_holds", rec.bound_holds)("smin_min",
                                                                             *std::min_element(
                                                                                 tail.smin.begin(),
                                                                                 tail.smin.end()))(
                "trials_below_N^-4", below)("seconds", t)
                .str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{
        kernel_validation, appendix_identities, widom_consistency, moment_identity, region_map,
        esd_convergence,   log_potential,       dominance,         anti_concentration, replacement,
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const long k = std::strtol(argv[i], nullptr, 10);
        if (k < 1 || k > static_cast<long>(criteria.size())) {
            std::cerr << "unknown criterion '" << argv[i] << "'\n";
            return 2;
        }
        selected.insert(static_cast<std::size_t>(k));
    }
    std::cout.precision(4);
    int failed = 0;
    for (std::size_t k = 1; k <= criteria.size(); ++k) {
        if (!selected.empty() && selected.count(k) == 0) {
            continue;
        }
        Outcome out;
        try {
            out = criteria[k - 1]();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failed += out.passed ? 0 : 1;
        std::cout << "criterion " << k << ": " << (out.passed ? "PASS" : "FAIL") << "  " << out.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
