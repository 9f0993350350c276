#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "toepspec/harness.hpp"
#include "toepspec/io.hpp"
#include "toepspec/linalg.hpp"
#include "toepspec/parallel.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/stats.hpp"

using namespace toepspec;

namespace {

const Symbol kQuad(2, 0, {0.0, 1.0, 1.0});

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.symbol = kQuad;
    c.sizes = {20, 40};
    c.trials = 3;
    c.mu_samples = 500;
    c.seed = 17;
    return c;
}

// Restores TOEPSPEC_THREADS on scope exit.
class ThreadsEnv {
public:
    explicit ThreadsEnv(const char* value) {
        if (const char* old = std::getenv(kThreadsEnv)) {
            saved_ = old;
        }
        ::setenv(kThreadsEnv, value, 1);
    }
    ~ThreadsEnv() {
        if (saved_.empty()) {
            ::unsetenv(kThreadsEnv);
        } else {
            ::setenv(kThreadsEnv, saved_.c_str(), 1);
        }
    }
    ThreadsEnv(const ThreadsEnv&) = delete;
    ThreadsEnv& operator=(const ThreadsEnv&) = delete;

private:
    std::string saved_;
};

}  // namespace

TEST_CASE("energy distance") {
    const std::vector<Complex> p{{0.0, 0.0}, {1.0, 2.0}, {-1.0, 0.5}};
    CHECK(energy_distance(p, p) == doctest::Approx(0.0));
    const std::vector<Complex> zero{0.0};
    const std::vector<Complex> one{1.0};
    CHECK(energy_distance(zero, one) == doctest::Approx(2.0));
    CHECK(energy_distance(p, one) == doctest::Approx(energy_distance(one, p)));
    CHECK(energy_distance(p, one, mean_abs_diff(one, one)) == doctest::Approx(energy_distance(p, one)));

    const CounterRng rng(3);
    std::vector<Complex> a;
    std::vector<Complex> b;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        a.push_back(rng.complex_normal(i));
        b.push_back(rng.complex_normal(i + 5000));
    }
    CHECK(energy_distance(a, b) < 0.05);
    CHECK_THROWS((void)energy_distance(a, std::vector<Complex>{}));
}

TEST_CASE("ks distance and median") {
    const CounterRng rng(4);
    std::vector<double> p;
    std::vector<double> q;
    for (std::uint64_t i = 0; i < 60; ++i) {
        p.push_back(std::floor(10.0 * rng.uniform(i)));
        q.push_back(rng.normal(i) * 3.0);
    }
    CHECK(ks_distance(p, q) == doctest::Approx(oracle::brute_ks(p, q)));
    CHECK(ks_distance(p, p) == 0.0);
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS((void)median({}));
}

TEST_CASE("parallel_for fills every slot and rethrows") {
    ThreadsEnv env("3");
    CHECK(thread_count() == 3);
    std::vector<int> out(1000, 0);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i] == static_cast<int>(i) * 2);
    }
    std::atomic<int> ran{0};
    CHECK_THROWS_AS(parallel_for(50,
                                 [&](std::size_t i) {
                                     ++ran;
                                     if (i == 7) {
                                         throw std::runtime_error("boom");
                                     }
                                 }),
                    std::runtime_error);
}

TEST_CASE("experiment config json") {
    const auto c = ExperimentConfig::from_json(nlohmann::json::parse(R"({
        "symbol": {"d1": 2, "d2": 0, "coeffs": [0, 1, 1]},
        "sizes": [100, 200],
        "gamma": 0.9,
        "noise": {"kind": "rademacher", "gamma": 0.6},
        "trials": 4,
        "z_grid": {"rect": [-1, 1, -2, 2], "resolution": 5},
        "seed": 9
    })"));
    CHECK(c.symbol == kQuad);
    CHECK(c.gamma == 0.9);
    CHECK(c.noise.gamma == 0.9);
    CHECK(c.noise.kind == NoiseKind::Rademacher);
    CHECK(c.z_grid.nodes().size() == 25);
    CHECK(c.z_grid.nodes().front() == Complex(-1.0, 2.0));
    CHECK(c.z_grid.nodes().back() == Complex(1.0, -2.0));
    const auto round = ExperimentConfig::from_json(c.to_json());
    CHECK(round.to_json() == c.to_json());
    CHECK(config_hash(round) == config_hash(c));

    auto changed = c;
    changed.seed = 10;
    CHECK(config_hash(changed) != config_hash(c));

    const auto reject = [](const char* text) {
        CHECK_THROWS_AS((void)ExperimentConfig::from_json(nlohmann::json::parse(text)),
                        std::invalid_argument);
    };
    reject(R"({"sizes": [10]})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]}, "gamma": 0.5})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]}, "sizes": [20, 10]})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]}, "sizes": []})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]}, "trials": 0})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]}, "sizse": [10]})");
    reject(R"({"symbol": {"d1":1,"d2":0,"coeffs":[0,1]},
               "z_grid": {"rect": [0,1,0,1], "points": [[0,0]]}})");
}

TEST_CASE("esd: Jordan perturbation hugs the unit circle") {
    ExperimentConfig c;
    c.sizes = {400};
    c.mu_samples = 200;
    const auto art = run_esd(c);
    REQUIRE(art.trials.size() == 1);
    std::vector<double> dev;
    for (const auto& e : art.trials[0].eigenvalues) {
        dev.push_back(std::abs(std::abs(e) - 1.0));
    }
    CHECK(median(dev) < 0.05);
}

TEST_CASE("esd: vanishing noise leaves the nilpotent spectrum") {
    ExperimentConfig c = small_config();
    c.sizes = {10};
    c.trials = 1;
    c.gamma = 200.0;
    c.noise.gamma = 200.0;
    const auto art = run_esd(c);
    for (const auto& e : art.trials[0].eigenvalues) {
        CHECK(std::abs(e) < 1e-6);
    }
}

TEST_CASE("esd artifacts are bit-identical across thread counts") {
    const ExperimentConfig c = small_config();
    EsdArtifact one;
    EsdArtifact many;
    {
        ThreadsEnv env("1");
        one = run_esd(c);
    }
    {
        ThreadsEnv env("4");
        many = run_esd(c);
    }
    std::ostringstream a;
    std::ostringstream b;
    write_esd_jsonl(a, one);
    write_esd_jsonl(b, many);
    CHECK(a.str() == b.str());
    REQUIRE(one.trials.size() == 6);
    CHECK(one.trials[4].n == 40);
    CHECK(one.trials[4].trial == 1);
    CHECK(one.trials[4].seed == derive_seed(c.seed, 40, 1));
    CHECK(one.config_hash == config_hash(c));
}

TEST_CASE("region map") {
    const Rect rect{-2.5, 3.5, -3.0, 3.0};
    const RegionMap map = run_region_map(kQuad, rect, 61);
    REQUIRE(map.labels.size() == 61 * 61);
    const auto label_at = [&](Complex z) {
        for (std::size_t i = 0; i < map.nodes.size(); ++i) {
            if (std::abs(map.nodes[i] - z) < 1e-9) {
                return map.labels[i];
            }
        }
        FAIL("node not found");
        return RegionLabel::boundary();
    };
    CHECK(label_at({-0.1, 0.0}).outside() == 0);
    CHECK(label_at({1.0, 0.0}).outside() == 1);
    CHECK(label_at({3.0, 0.0}).outside() == 2);

    const RegionMap unit = run_region_map(Symbol(1, 0, {0.0, 1.0}), {-2.0, 2.0, -2.0, 2.0}, 21);
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
        const double r = std::abs(unit.nodes[i]);
        if (std::abs(r - 1.0) > 1e-6) {
            CHECK(unit.labels[i].outside() == (r > 1.0 ? 1 : 0));
        }
    }

    std::ostringstream csv;
    write_region_csv(csv, map);
    CHECK(csv.str().rfind("re,im,label,defect\n", 0) == 0);
    std::ostringstream svg;
    write_region_svg(svg, map, 2);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("<script") == std::string::npos);
    CHECK_THROWS((void)run_region_map(kQuad, rect, 1));
}

TEST_CASE("logpot") {
    ExperimentConfig c = small_config();
    c.sizes = {60};
    const std::vector<Complex> zs{{3.0, 0.0}, {-0.1, 0.0}};
    const auto table = run_logpot(c, zs);
    REQUIRE(table.rows.size() == 6);
    REQUIRE(table.summaries.size() == 2);
    CHECK(table.summaries[0].limit == doctest::Approx(std::log(3.0)));
    CHECK(std::abs(table.summaries[0].median - std::log(3.0)) < 0.05);
    CHECK(table.rows[0].seed == derive_seed(c.seed, 60, 0));

    const std::vector<Complex> boundary{{2.0, 0.0}};
    CHECK_THROWS((void)run_logpot(c, boundary));
}

TEST_CASE("logpot limits shift by log|c| under scaling") {
    ExperimentConfig c = small_config();
    c.sizes = {30};
    c.trials = 1;
    const Complex scale{0.0, 2.0};
    const std::vector<Complex> zs{{3.0, 0.0}, {1.0, 0.0}, {-0.1, 0.0}};
    std::vector<Complex> scaled_z;
    for (const auto& z : zs) {
        scaled_z.push_back(scale * z);
    }
    const auto base = run_logpot(c, zs);
    c.symbol = kQuad.scaled(scale);
    const auto scaled = run_logpot(c, scaled_z);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        CHECK(scaled.summaries[i].limit == doctest::Approx(base.summaries[i].limit + std::log(2.0)));
    }
}

TEST_CASE("replacement") {
    NoiseModel gauss;
    NoiseModel rad;
    rad.kind = NoiseKind::Rademacher;
    SUBCASE("identical models give identical spectra") {
        const auto rec = run_replacement(kQuad, 1.0, 40, gauss, gauss, 2, 5);
        CHECK(rec.ks == 0.0);
        for (const auto& row : rec.grid) {
            CHECK(row.diff == 0.0);
        }
        CHECK(rec.bound_holds);
    }
    SUBCASE("Stieltjes differences respect the bound") {
        const auto rec = run_replacement(kQuad, 1.0, 60, gauss, rad, 3, 6);
        CHECK(rec.singular_a.size() == 180);
        CHECK(rec.grid.size() == 3 * 3 * 21);
        CHECK(rec.bound_holds);
        for (const auto& row : rec.grid) {
            CHECK(row.diff <= row.bound);
        }
        std::ostringstream csv;
        write_replacement_csv(csv, rec);
        CHECK(!csv.str().empty());
    }
}

TEST_CASE("interval mass") {
    SUBCASE("point mass at zero") {
        const std::vector<double> sv{0.0};
        const auto m = interval_mass_check(sv, -1.0, 1.0, 0.01, 0.1);
        CHECK(m.mass == 1.0);
        CHECK(m.upper >= 1.0);
        CHECK(m.lower <= 1.0);
    }
    SUBCASE("two atoms at +-1") {
        const std::vector<double> sv{1.0};
        const auto m = interval_mass_check(sv, 0.5, 1.5, 0.01, 0.1);
        CHECK(m.mass == 0.5);
        CHECK(m.lower <= 0.5);
        CHECK(m.upper >= 0.5);
        CHECK(m.upper - 0.01 / 0.1 ==
              doctest::Approx(oracle::lorentz_mass(sv, 0.4, 1.6, 0.01)).epsilon(1e-8));
        CHECK(m.lower + 0.01 / 0.1 ==
              doctest::Approx(oracle::lorentz_mass(sv, 0.6, 1.4, 0.01)).epsilon(1e-8));
    }
    SUBCASE("gap shrinks to the collar mass as tau -> 0") {
        const std::vector<double> sv{0.2, 0.45, 0.55, 0.9, 1.3};
        const double rho = 0.1;
        // only the collar [0.4, 0.6] holds atoms: 0.45 and 0.55, two of ten
        const double collar = 2.0 / 10.0;
        double previous = 1e300;
        for (const double tau : {1e-2, 1e-3, 1e-4}) {
            const auto m = interval_mass_check(sv, 0.5, 1.1, tau, rho);
            const double gap = m.upper - m.lower;
            CHECK(gap < previous);
            previous = gap;
        }
        CHECK(previous == doctest::Approx(collar).epsilon(0.02));
    }
    SUBCASE("parameter violations") {
        const std::vector<double> sv{1.0};
        CHECK_THROWS((void)interval_mass_check(sv, 0.0, 0.05, 0.01, 0.1));
        CHECK_THROWS((void)interval_mass_check(sv, 0.0, 1.0, 0.0, 0.1));
    }
}

TEST_CASE("adaptive simpson") {
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-10));
    const double tau = 1e-4;
    CHECK(adaptive_simpson([tau](double x) { return tau / (x * x + tau * tau); }, -1.0, 1.0, 1e-10) ==
          doctest::Approx(2.0 * std::atan(1.0 / tau)).epsilon(1e-8));
}
