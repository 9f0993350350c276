#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "toepspec/linalg.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/symbol.hpp"

using namespace toepspec;

namespace {

const Symbol kQuad(2, 0, {0.0, 1.0, 1.0});   // lambda + lambda^2
const Symbol kTri(1, 1, {1.0, 0.0, 1.0});    // lambda + 1/lambda
const Symbol kShift(1, 0, {0.0, 1.0});       // lambda

// Roots of P_z from the companion matrix, negated.
std::vector<Complex> companion_lambdas(const Symbol& s, Complex z) {
    const auto c = s.char_poly(z);
    const std::size_t d = c.size() - 1;
    ComplexMatrix comp(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        comp(0, j) = -c[d - 1 - j] / c[d];
    }
    for (std::size_t i = 1; i < d; ++i) {
        comp(i, i - 1) = 1.0;
    }
    std::vector<Complex> out;
    for (const auto& r : eigenvalues(comp).eigenvalues) {
        out.push_back(-r);
    }
    return out;
}

}  // namespace

TEST_CASE("symbol rejects invalid coefficient layouts") {
    CHECK_THROWS_AS(Symbol(0, 0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Symbol(2, 0, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Symbol(1, 0, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Symbol(1, 1, {0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Symbol(-1, 2, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("eval") {
    CHECK(std::abs(kQuad.eval(1.0) - Complex(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(kQuad.eval({0.0, 1.0}) - Complex(-1.0, 1.0)) < 1e-15);
    CHECK(std::abs(kTri.eval(std::polar(1.0, std::numbers::pi / 3)) - Complex(1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS((void)kTri.eval(0.0), std::domain_error);
    CHECK(std::abs(kQuad.eval(0.0)) == 0.0);
}

TEST_CASE("json round trip and parse") {
    const Symbol s = Symbol::parse(R"({"d1":2,"d2":1,"coeffs":[[0.5,-1],0,[1,0],[0,2]]})");
    CHECK(s.d1() == 2);
    CHECK(s.d2() == 1);
    CHECK(s.coeff(-1) == Complex(0.5, -1.0));
    CHECK(s.coeff(2) == Complex(0.0, 2.0));
    CHECK(s.coeff(3) == Complex{});
    CHECK(Symbol::from_json(s.to_json()) == s);
    CHECK_THROWS_AS((void)Symbol::parse("{"), std::invalid_argument);
    CHECK_THROWS_AS((void)Symbol::parse(R"({"d1":1,"d2":0,"coeffs":[[1,2,3],1]})"),
                    std::invalid_argument);
}

TEST_CASE("root_profile on the quadratic symbol") {
    SUBCASE("z = 3: both roots outside") {
        const auto p = root_profile(kQuad, 3.0);
        REQUIRE(p.roots.size() == 2);
        CHECK(std::abs(p.roots[0]) == doctest::Approx(2.302775637731995).epsilon(1e-13));
        CHECK(std::abs(p.roots[1]) == doctest::Approx(1.3027756377319946).epsilon(1e-13));
        CHECK(p.d0 == 2);
        CHECK(p.defect == 0);
        CHECK_FALSE(p.boundary);
    }
    SUBCASE("z = 1: golden ratio") {
        const auto p = root_profile(kQuad, 1.0);
        CHECK(std::abs(p.roots[0]) == doctest::Approx(1.618033988749895).epsilon(1e-13));
        CHECK(std::abs(p.roots[1]) == doctest::Approx(0.6180339887498949).epsilon(1e-13));
        CHECK(p.d0 == 1);
        CHECK(p.defect == 1);
    }
    SUBCASE("z = -0.1: both inside") {
        const auto p = root_profile(kQuad, -0.1);
        CHECK(p.roots[0].real() == doctest::Approx(0.8872983346207417).epsilon(1e-13));
        CHECK(p.roots[1].real() == doctest::Approx(0.1127016653792583).epsilon(1e-13));
        CHECK(p.d0 == 0);
        CHECK(p.defect == 2);
    }
    SUBCASE("tridiagonal at z = 0 sits on the boundary") {
        const auto p = root_profile(kTri, 0.0);
        CHECK(std::abs(p.roots[0]) == doctest::Approx(1.0));
        CHECK(std::abs(p.roots[1]) == doctest::Approx(1.0));
        CHECK(p.boundary);
        // equal moduli: descending real part, then descending imaginary part
        CHECK(p.roots[0].imag() > p.roots[1].imag());
    }
}

TEST_CASE("stored roots are negated roots of P_z") {
    const Symbol s(2, 1, {0.3, {1.0, -0.5}, 0.2, 1.0});
    const Complex z{0.4, -0.7};
    const auto p = root_profile(s, z);
    const auto c = s.char_poly(z);
    for (const auto& lam : p.roots) {
        Complex val = 0.0;
        double scale = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) {
            val = val * (-lam) + c[j];
            scale = scale * std::abs(lam) + std::abs(c[j]);
        }
        CHECK(std::abs(val) <= 1e-12 * scale);
    }
    for (std::size_t i = 1; i < p.roots.size(); ++i) {
        CHECK(std::abs(p.roots[i - 1]) >= std::abs(p.roots[i]));
    }
}

TEST_CASE("zero low-order coefficients give exact zero roots") {
    const auto p = root_profile(kQuad, 0.0);
    CHECK(p.roots[1] == Complex{});
    CHECK(std::abs(p.roots[0] - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("root product is independent of z") {
    const CounterRng rng(11);
    const Symbol s(2, 2, {{0.7, 0.2}, 0.1, -0.4, {0.0, 1.0}, 1.5});
    const double target = std::abs(s.coeff(-2)) / std::abs(s.coeff(2));
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto p = root_profile(s, 3.0 * rng.complex_normal(t));
        double prod = 1.0;
        for (const auto& r : p.roots) {
            prod *= std::abs(r);
        }
        CHECK(prod == doctest::Approx(target).epsilon(1e-10));
    }
}

TEST_CASE("Aberth roots agree with companion eigenvalues") {
    const CounterRng rng(12);
    for (std::uint64_t t = 0; t < 60; ++t) {
        const int d1 = 1 + static_cast<int>(rng.bits(1000 + t) % 4);
        const int d2 = static_cast<int>(rng.bits(2000 + t) % 3);
        std::vector<Complex> coeffs;
        for (int k = 0; k <= d1 + d2; ++k) {
            coeffs.push_back(rng.complex_normal(100 * t + static_cast<std::uint64_t>(k)));
        }
        const Symbol s(d1, d2, coeffs);
        const Complex z = rng.complex_normal(100 * t + 99);
        const auto p = root_profile(s, z);
        if (p.near_double_root) {
            continue;
        }
        auto comp = companion_lambdas(s, z);
        for (const auto& r : p.roots) {
            auto best = std::min_element(comp.begin(), comp.end(), [&](Complex a, Complex b) {
                return std::abs(a - r) < std::abs(b - r);
            });
            CHECK(std::abs(*best - r) < 1e-8);
            comp.erase(best);
        }
    }
}

TEST_CASE("classify_region") {
    CHECK(classify_region(kQuad, -0.1) == RegionLabel::region(2, 0));
    CHECK(classify_region(kQuad, 1.0) == RegionLabel::region(1, 1));
    CHECK(classify_region(kQuad, 3.0) == RegionLabel::region(0, 2));
    CHECK(classify_region(kQuad, 2.0).is_boundary());
    CHECK(classify_region(kQuad, 3.0).to_string() == "R2");
    CHECK(classify_region(kQuad, 2.0).to_string() == "BOUNDARY");
    // a = lambda: one root equal to z
    CHECK(classify_region(kShift, 0.5).outside() == 0);
    CHECK(classify_region(kShift, {1.5, 0.5}).outside() == 1);
}

TEST_CASE("classify_region is locally constant off the boundary") {
    const CounterRng rng(13);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Complex z{-2.5 + 6.0 * rng.uniform(2 * t), -3.0 + 6.0 * rng.uniform(2 * t + 1)};
        const RegionLabel base = classify_region(kQuad, z);
        if (base.is_boundary()) {
            continue;
        }
        const Complex eps = std::polar(kBoundaryTol / 10.0, 2.0 * std::numbers::pi * rng.uniform(t + 5000));
        CHECK(classify_region(kQuad, z + eps) == base);
    }
}

TEST_CASE("limit_logpot") {
    CHECK(limit_logpot(kQuad, 3.0) == doctest::Approx(1.0986122886681098).epsilon(1e-12));
    CHECK(limit_logpot(kQuad, -0.1) == doctest::Approx(0.0));
    CHECK(limit_logpot(kQuad, 1.0) == doctest::Approx(0.48121182505960347).epsilon(1e-12));
    for (const Symbol& s : {kQuad, kTri, Symbol(1, 2, {0.5, 0.0, 0.2, 2.0})}) {
        const Complex z = std::polar(1e3, 0.7);
        CHECK(std::abs(limit_logpot(s, z) - std::log(std::abs(z))) < 1e-2);
    }
}

TEST_CASE("limit_logpot scales with the symbol") {
    const Complex c{0.5, 1.5};
    const Symbol scaled = kQuad.scaled(c);
    for (const Complex z : {Complex{3.0, 0.0}, Complex{1.0, 0.0}, Complex{-0.1, 0.0}}) {
        CHECK(limit_logpot(scaled, c * z) ==
              doctest::Approx(limit_logpot(kQuad, z) + std::log(std::abs(c))).epsilon(1e-12));
    }
}

TEST_CASE("sample_mu_a") {
    const auto a = sample_mu_a(kShift, 1000, 5);
    for (const auto& p : a.points) {
        CHECK(std::abs(std::abs(p) - 1.0) < 1e-14);
    }
    constexpr std::size_t n = 100000;
    const auto b = sample_mu_a(kQuad, n, 6);
    Complex mean = 0.0;
    for (const auto& p : b.points) {
        mean += p;
    }
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)) * 2.0);
    for (std::size_t j = 0; j < n; j += 997) {
        CHECK(std::abs(b.points[j] - kQuad.eval(std::polar(1.0, b.angles[j]))) < 1e-14);
    }
    for (int k = 1; k <= 3; ++k) {
        Complex m = 0.0;
        for (const double th : b.angles) {
            m += std::polar(1.0, k * th);
        }
        m /= static_cast<double>(n);
        CHECK(std::abs(m) < 5.0 / std::sqrt(static_cast<double>(n)));
    }
    CHECK(sample_mu_a(kQuad, 10, 6).points == sample_mu_a(kQuad, 10, 6).points);
    CHECK_THROWS_AS((void)sample_mu_a(kQuad, 0, 1), std::invalid_argument);
}
