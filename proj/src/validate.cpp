#include "toepspec/validate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "toepspec/expansion.hpp"
#include "toepspec/harness.hpp"
#include "toepspec/linalg.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/toeplitz.hpp"

namespace toepspec {

namespace {

std::string fmt(const char* label, double v) {
    std::ostringstream os;
    os << label << '=' << v;
    return os.str();
}

// Greedy multiset distance: each value in a matched to its nearest unused value in b.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0.0;
    for (const auto& x : a) {
        auto best = b.begin();
        for (auto it = b.begin(); it != b.end(); ++it) {
            if (std::abs(*it - x) < std::abs(*best - x)) {
                best = it;
            }
        }
        worst = std::max(worst, std::abs(*best - x));
        b.erase(best);
    }
    return worst;
}

std::vector<Complex> companion_roots(const std::vector<Complex>& c) {
    const std::size_t d = c.size() - 1;
    ComplexMatrix comp(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        comp(0, j) = -c[d - 1 - j] / c[d];
    }
    for (std::size_t i = 1; i < d; ++i) {
        comp(i, i - 1) = 1.0;
    }
    return eigenvalues(comp).eigenvalues;
}

ComplexMatrix random_matrix(std::size_t n, const CounterRng& rng, std::uint64_t offset) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) {
        m.data()[i] = rng.complex_normal(offset + i);
    }
    return m;
}

double rel_err(Complex a, Complex b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

CheckResult tridiagonal_spectrum() {
    const Symbol tri(1, 1, {1.0, 0.0, 1.0});
    constexpr std::size_t n = 100;
    const SpectrumResult r = eigenvalues(build(tri, n));
    std::vector<double> ev;
    for (const auto& e : r.eigenvalues) {
        ev.push_back(e.real());
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    double err = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        err = std::max(err, std::abs(ev[k - 1] - 2.0 * std::cos(k * std::numbers::pi / (n + 1))));
    }
    return {"tridiagonal spectrum closed form", r.converged && err < 1e-8, fmt("max_err", err)};
}

CheckResult roots_vs_companion(std::uint64_t seed) {
    const CounterRng rng(derive_seed(seed, 1));
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        const int d1 = static_cast<int>(rng.bits(100 * t) % 4);
        const int d2 = static_cast<int>(rng.bits(100 * t + 1) % 3) + (d1 == 0 ? 1 : 0);
        std::vector<Complex> coeffs;
        for (int k = 0; k <= d1 + d2; ++k) {
            coeffs.push_back(rng.complex_normal(100 * t + 10 + k));
        }
        const Symbol s(d1, d2, coeffs);
        const Complex z = rng.complex_normal(100 * t + 50);
        const RootProfile p = root_profile(s, z);
        if (p.near_double_root) {
            continue;
        }
        std::vector<Complex> neg;
        for (const auto& r : companion_roots(s.char_poly(z))) {
            neg.push_back(-r);
        }
        worst = std::max(worst, multiset_distance(p.roots, neg));
    }
    return {"Aberth roots vs companion eigenvalues", worst < 1e-8, fmt("max_dist", worst)};
}

CheckResult logdet_vs_eigenvalues(std::uint64_t seed) {
    const CounterRng rng(derive_seed(seed, 2));
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const ComplexMatrix m = random_matrix(8, rng, 64 * t);
        const SpectrumResult r = eigenvalues(m);
        double sum_log = 0.0;
        Complex sum = 0.0;
        for (const auto& e : r.eigenvalues) {
            sum_log += std::log(std::abs(e));
            sum += e;
        }
        worst = std::max({worst, std::abs(sum_log - lu_logdet(m).log_abs) /
                                     std::max(1.0, std::abs(sum_log)),
                          rel_err(sum, m.trace())});
    }
    return {"LU log-determinant and trace vs eigenvalues", worst < 1e-8, fmt("max_rel", worst)};
}

CheckResult det_sum(std::uint64_t seed) {
    const CounterRng rng(derive_seed(seed, 3));
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 60; ++t) {
        const std::size_t n = 1 + rng.bits(1000 * t) % 6;
        const ComplexMatrix a = random_matrix(n, rng, 1000 * t + 1);
        ComplexMatrix b = random_matrix(n, rng, 1000 * t + 500);
        if (t % 2 == 0) {
            for (std::size_t i = 0; i < n * n; ++i) {
                if (rng.uniform(1000 * t + 900 + i) < 0.6) {
                    b.data()[i] = 0.0;
                }
            }
        }
        worst = std::max(worst, rel_err(det_sum_decomposition(a, b), determinant(a + b)));
    }
    return {"determinant sum decomposition vs LU", worst < 1e-9, fmt("max_rel", worst)};
}

CheckResult bidiagonal_minors() {
    double worst = 0.0;
    const Complex zeta{0.7, -0.4};
    for (std::size_t n = 1; n <= 4; ++n) {
        ComplexMatrix a = jordan(n);
        for (std::size_t i = 0; i < n; ++i) {
            a(i, i) = zeta;
        }
        for (unsigned xm = 0; xm < (1U << n); ++xm) {
            for (unsigned ym = 0; ym < (1U << n); ++ym) {
                if (std::popcount(xm) != std::popcount(ym)) {
                    continue;
                }
                Subset x;
                Subset y;
                for (std::size_t i = 0; i < n; ++i) {
                    if (xm & (1U << i)) {
                        x.push_back(i);
                    }
                    if (ym & (1U << i)) {
                        y.push_back(i);
                    }
                }
                worst = std::max(worst, rel_err(bidiag_subdet(zeta, x, y, n), minor_det(a, x, y)));
            }
        }
    }
    return {"bidiagonal minor closed form vs dense", worst < 1e-12, fmt("max_rel", worst)};
}

CheckResult widom_vs_lu(std::uint64_t seed) {
    const CounterRng rng(derive_seed(seed, 4));
    const std::vector<Symbol> symbols{Symbol(2, 0, {0.0, 1.0, 1.0}), Symbol(1, 1, {1.0, 0.0, 1.0}),
                                      Symbol(1, 2, {0.5, {0.0, -1.0}, 0.2, 1.0})};
    double worst = 0.0;
    for (std::size_t si = 0; si < symbols.size(); ++si) {
        for (std::uint64_t t = 0; t < 5; ++t) {
            const Complex z = 2.0 * rng.complex_normal(10 * si + t);
            if (root_profile(symbols[si], z).near_double_root) {
                continue;
            }
            for (std::size_t n = 1; n <= 8; ++n) {
                const Complex w = widom_sum(symbols[si], z, n).value();
                const Complex l = determinant(build_z(symbols[si], z, n));
                worst = std::max(worst, std::abs(w - l) / std::abs(l));
            }
        }
    }
    return {"root-expansion determinant vs LU (phase included)", worst < 1e-8,
            fmt("max_rel", worst)};
}

CheckResult factorization() {
    const Symbol s(2, 1, {0.3, 1.0, {0.0, 0.5}, 1.0});
    double worst = 0.0;
    for (const Complex z : {Complex{0.2, 0.1}, Complex{-1.0, 2.0}, Complex{3.0, 0.0}}) {
        worst = std::max(worst, bidiagonal_factor_check(s, z, 12));
        const ComplexMatrix big = build_shifted(s, z, {s.degree(), 0}, 12 + 1);
        Subset rows(12);
        Subset cols(12);
        for (std::size_t i = 0; i < 12; ++i) {
            rows[i] = i;
            cols[i] = i + 1;
        }
        worst = std::max(worst, max_abs_diff(big.select(rows, cols), build_z(s, z, 12)));
    }
    return {"bidiagonal factorization and embedding", worst < 1e-10, fmt("max_abs", worst)};
}

CheckResult first_moment() {
    const Symbol s(2, 0, {0.0, 1.0, 1.0});
    constexpr std::size_t n = 200;
    double worst = 0.0;
    for (const Complex z : {Complex{0.0, 0.0}, Complex{1.0, 1.0}}) {
        worst = std::max(worst, std::abs(moment_lhs(s, z, 1, n) - moment_rhs(s, z, 1)));
    }
    return {"first moment identity", worst < 10.0 * 2 / n, fmt("max_abs", worst)};
}

CheckResult stieltjes_bound(std::uint64_t seed) {
    const CounterRng rng(derive_seed(seed, 5));
    bool ok = true;
    double worst_ratio = 0.0;
    for (std::uint64_t t = 0; t < 10; ++t) {
        const ComplexMatrix c = random_matrix(12, rng, 400 * t);
        ComplexMatrix d = c;
        d += 0.1 * random_matrix(12, rng, 400 * t + 200);
        const auto sc = singular_values(c);
        const auto sd = singular_values(d);
        const double hs = hs_norm(c - d);
        for (const double im : {0.5, 1.0, 2.0}) {
            const Complex xi{0.3 * static_cast<double>(t), im};
            const Complex gc = stieltjes(sc, xi);
            ok = ok && gc.imag() < 0.0;
            const double diff = std::abs(gc - stieltjes(sd, xi));
            const double bound = hs / (std::sqrt(12.0) * im * im);
            worst_ratio = std::max(worst_ratio, diff / bound);
        }
    }
    return {"Stieltjes sign and difference bound", ok && worst_ratio <= 1.0,
            fmt("max_diff_over_bound", worst_ratio)};
}

CheckResult anti_concentration(std::uint64_t seed) {
    const std::vector<MultilinearTerm> q{{1.0, {0, 1}}, {-1.0, {2, 3}}};
    const std::vector<double> eps{1e-3, 1e-2, 1e-1};
    const auto rows = anti_conc_experiment(2, 4, q, eps, 20000, derive_seed(seed, 6));
    bool ok = true;
    double worst = 0.0;
    for (const auto& r : rows) {
        ok = ok && r.frequency <= r.bound;
        worst = std::max(worst, r.frequency / r.bound);
    }
    return {"anti-concentration bound", ok, fmt("max_freq_over_bound", worst)};
}

CheckResult haar(std::uint64_t seed) {
    const ComplexMatrix u = haar_unitary(30, seed);
    const double dev = hs_norm(multiply(u, u.adjoint()) - ComplexMatrix::identity(30));
    return {"Haar unitary orthonormality", dev < 1e-10, fmt("hs_dev", dev)};
}

CheckResult interval_mass() {
    const std::vector<double> sv{1.0, 1.0};
    const IntervalMass m = interval_mass_check(sv, 0.5, 1.5, 0.01, 0.1);
    return {"Stieltjes interval-mass bracket", m.lower <= m.mass && m.mass <= m.upper,
            fmt("mass", m.mass) + " " + fmt("lower", m.lower) + " " + fmt("upper", m.upper)};
}

}  // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed) {
    return {
        tridiagonal_spectrum(),   roots_vs_companion(seed), logdet_vs_eigenvalues(seed),
        det_sum(seed),            bidiagonal_minors(),      widom_vs_lu(seed),
        factorization(),          first_moment(),           stieltjes_bound(seed),
        anti_concentration(seed), haar(seed),               interval_mass(),
    };
}

}  // namespace toepspec
