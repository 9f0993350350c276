#include "toepspec/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

#include "toepspec/linalg.hpp"
#include "toepspec/rng.hpp"
#include "toepspec/toeplitz.hpp"

namespace toepspec {

namespace {

void check_subset(std::span<const std::size_t> x, std::size_t n, const char* who) {
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] >= n || (t > 0 && x[t] <= x[t - 1])) {
            throw std::invalid_argument(std::string(who) +
                                        ": subset must be strictly increasing within [0, N)");
        }
    }
}

Subset complement(std::span<const std::size_t> x, std::size_t n) {
    Subset c;
    c.reserve(n - x.size());
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (t < x.size() && x[t] == i) {
            ++t;
        } else {
            c.push_back(i);
        }
    }
    return c;
}

// Calls f on every k-element subset of `pool` (pool sorted ascending).
void for_each_combination(const Subset& pool, std::size_t k,
                          const std::function<void(const Subset&)>& f) {
    if (k > pool.size()) {
        return;
    }
    Subset pick(k);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        for (std::size_t i = 0; i < k; ++i) {
            pick[i] = pool[idx[i]];
        }
        f(pick);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

Subset nonzero_rows(const ComplexMatrix& m) {
    Subset rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        if (std::any_of(r.begin(), r.end(), [](Complex v) { return v != Complex{}; })) {
            rows.push_back(i);
        }
    }
    return rows;
}

Subset nonzero_cols(const ComplexMatrix& m) {
    Subset cols;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (m(i, j) != Complex{}) {
                cols.push_back(j);
                break;
            }
        }
    }
    return cols;
}

Complex sub_det(const ComplexMatrix& m, std::span<const std::size_t> rows,
                std::span<const std::size_t> cols) {
    if (rows.empty()) {
        return 1.0;
    }
    return determinant(m.select(rows, cols));
}

// Sum over |X| = |Y| = k of the signed products; X, Y drawn from the pools.
Complex signed_sum(const ComplexMatrix& a, const ComplexMatrix& b, const Subset& row_pool,
                   const Subset& col_pool, std::size_t k) {
    const std::size_t n = a.rows();
    Complex total = 0.0;
    for_each_combination(row_pool, k, [&](const Subset& x) {
        for_each_combination(col_pool, k, [&](const Subset& y) {
            const Complex bxy = sub_det(b, x, y);
            if (bxy == Complex{}) {
                return;
            }
            const double sign = perm_sign(x, n) * perm_sign(y, n);
            total += sign * minor_det(a, x, y) * bxy;
        });
    });
    return total;
}

}  // namespace

int perm_sign(std::span<const std::size_t> x, std::size_t n) {
    check_subset(x, n, "perm_sign");
    std::size_t inversions = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        inversions += x[t] - t;
    }
    return inversions % 2 == 0 ? 1 : -1;
}

Complex minor_det(const ComplexMatrix& a, std::span<const std::size_t> x,
                  std::span<const std::size_t> y) {
    if (!a.is_square() || x.size() != y.size()) {
        throw std::invalid_argument("minor_det: need a square matrix and |X| = |Y|");
    }
    check_subset(x, a.rows(), "minor_det");
    check_subset(y, a.rows(), "minor_det");
    const Subset xc = complement(x, a.rows());
    const Subset yc = complement(y, a.rows());
    return sub_det(a, xc, yc);
}

Complex det_sum_decomposition(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("det_sum_decomposition: A and B must be square of equal size");
    }
    if (a.rows() > kDetSumMaxN) {
        throw std::length_error("det_sum_decomposition: N exceeds 12");
    }
    const Subset rows = nonzero_rows(b);
    const Subset cols = nonzero_cols(b);
    Complex total = 0.0;
    for (std::size_t k = 0; k <= std::min(rows.size(), cols.size()); ++k) {
        total += signed_sum(a, b, rows, cols, k);
    }
    return total;
}

Complex bidiag_subdet(Complex zeta, std::span<const std::size_t> x,
                      std::span<const std::size_t> y, std::size_t n) {
    if (x.size() != y.size() || x.size() > n) {
        throw std::invalid_argument("bidiag_subdet: need |X| = |Y| <= N");
    }
    check_subset(x, n, "bidiag_subdet");
    check_subset(y, n, "bidiag_subdet");
    const std::size_t k = x.size();
    const auto ipow = [zeta](std::size_t e) {
        Complex r = 1.0;
        for (std::size_t i = 0; i < e; ++i) {
            r *= zeta;
        }
        return r;
    };
    if (k == 0) {
        return ipow(n);
    }
    // 1-based: y_i <= x_i < y_{i+1}, with y_{k+1} = infinity.
    for (std::size_t i = 0; i < k; ++i) {
        if (y[i] > x[i] || (i + 1 < k && x[i] >= y[i + 1])) {
            return 0.0;
        }
    }
    std::size_t exponent = y[0];  // y_1 - 1 in 1-based terms
    for (std::size_t i = 1; i < k; ++i) {
        exponent += y[i] - x[i - 1] - 1;
    }
    exponent += n - 1 - x[k - 1];  // N - x_k
    return ipow(exponent);
}

Complex corner_pk(const Symbol& s, Complex z, const ComplexMatrix& delta, int k) {
    if (!delta.is_square() || delta.rows() == 0) {
        throw std::invalid_argument("corner_pk: Delta must be square and nonempty");
    }
    if (delta.rows() > kCornerPkMaxN) {
        throw std::length_error("corner_pk: N exceeds 60");
    }
    if (k < 0) {
        throw std::invalid_argument("corner_pk: k must be >= 0");
    }
    const ComplexMatrix t = build_z(s, z, delta.rows());
    return signed_sum(t, delta, nonzero_rows(delta), nonzero_cols(delta),
                      static_cast<std::size_t>(k));
}

DominanceReport dominance_report(const Symbol& s, Complex z, const ComplexMatrix& delta) {
    const RootProfile profile = root_profile(s, z);
    const RegionLabel label = classify_region(profile, s.d1());
    if (label.is_boundary()) {
        throw std::domain_error("dominance_report: z is on the BOUNDARY");
    }
    const std::size_t n = delta.rows();
    const auto nd = static_cast<double>(n);
    DominanceReport r;
    r.defect = label.defect();
    const int dom = std::abs(r.defect);
    for (int k = 0; k <= s.degree(); ++k) {
        r.pk.push_back(corner_pk(s, z, delta, k));
    }
    r.log_normalizer = nd * std::log(std::abs(s.coeff(s.d1())));
    for (int i = 0; i < profile.d0; ++i) {
        r.log_normalizer += nd * std::log(std::abs(profile.roots[static_cast<std::size_t>(i)]));
    }
    const double normalizer = std::exp(r.log_normalizer);
    Complex above = 0.0;
    double below = 0.0;
    for (int k = 0; k <= s.degree(); ++k) {
        if (k > dom) {
            above += r.pk[static_cast<std::size_t>(k)];
        } else if (k < dom) {
            below += std::abs(r.pk[static_cast<std::size_t>(k)]);
        }
    }
    const double pd = std::abs(r.pk[static_cast<std::size_t>(dom)]);
    r.ratio_above = std::abs(above) / pd;
    r.ratio_below = below / normalizer;
    r.normalized_pd = pd / normalizer;
    r.tail_above = std::abs(above) / normalizer;
    return r;
}

double anti_conc_bound(int k, double c_star, double eps) {
    if (k < 1 || !(c_star > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("anti_conc_bound: need k >= 1, c* > 0, eps > 0");
    }
    return std::pow(8.0 * std::numbers::e, k) / std::min(c_star, 1.0) * eps *
           std::pow(std::log(1.0 / eps), k - 1);
}

std::vector<AntiConcRow> anti_conc_experiment(int k, std::size_t n,
                                              std::span<const MultilinearTerm> terms,
                                              std::span<const double> eps_grid,
                                              std::size_t trials, std::uint64_t seed) {
    if (k < 1 || n == 0 || trials == 0 || terms.empty()) {
        throw std::invalid_argument("anti_conc_experiment: need k, n, trials >= 1 and some terms");
    }
    std::set<Subset> seen;
    double c_star = 0.0;
    for (const auto& term : terms) {
        Subset idx = term.indices;
        std::sort(idx.begin(), idx.end());
        if (idx.size() != static_cast<std::size_t>(k) ||
            std::adjacent_find(idx.begin(), idx.end()) != idx.end() || idx.back() >= n) {
            throw std::invalid_argument(
                "anti_conc_experiment: each term needs k distinct indices below n");
        }
        if (!seen.insert(idx).second) {
            throw std::invalid_argument("anti_conc_experiment: repeated monomial");
        }
        c_star = std::max(c_star, std::abs(term.coef));
    }
    if (!(c_star > 0.0)) {
        throw std::invalid_argument("anti_conc_experiment: all coefficients vanish");
    }
    for (const double eps : eps_grid) {
        if (!(eps > 0.0) || eps > 1.0 / std::numbers::e) {
            throw std::invalid_argument("anti_conc_experiment: eps must lie in (0, 1/e]");
        }
    }

    std::vector<std::size_t> hits(eps_grid.size(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
        const CounterRng rng(derive_seed(seed, t));
        Complex q = 0.0;
        for (const auto& term : terms) {
            Complex prod = term.coef;
            for (const auto i : term.indices) {
                prod *= rng.uniform(i);
            }
            q += prod;
        }
        const double mag = std::abs(q);
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            if (mag <= eps_grid[e]) {
                ++hits[e];
            }
        }
    }

    constexpr double kZ = 1.959963984540054;
    const auto nt = static_cast<double>(trials);
    std::vector<AntiConcRow> rows;
    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        AntiConcRow row;
        row.eps = eps_grid[e];
        row.hits = hits[e];
        row.frequency = static_cast<double>(hits[e]) / nt;
        const double denom = 1.0 + kZ * kZ / nt;
        const double centre = (row.frequency + kZ * kZ / (2.0 * nt)) / denom;
        const double half =
            kZ * std::sqrt(row.frequency * (1.0 - row.frequency) / nt + kZ * kZ / (4.0 * nt * nt)) /
            denom;
        row.wilson_lo = std::max(0.0, centre - half);
        row.wilson_hi = std::min(1.0, centre + half);
        row.bound = anti_conc_bound(k, c_star, row.eps);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace toepspec
