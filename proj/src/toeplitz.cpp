#include "toepspec/toeplitz.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace toepspec {

namespace {

constexpr std::size_t kQuadratureNodes = std::size_t{1} << 14;

// Coefficient a'_k = a_k - z [k == 0].
Complex shifted_coeff(const Symbol& s, Complex z, int k) {
    return k == 0 ? s.coeff(0) - z : s.coeff(k);
}

// Entries of a Hessenberg-free band matrix from a function of the offset.
template <typename F>
ComplexMatrix banded(std::size_t n, int above, int below, F&& entry) {
    ComplexMatrix m(n, n);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        const std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(0, i - below);
        const std::ptrdiff_t jhi = std::min<std::ptrdiff_t>(sn - 1, i + above);
        for (std::ptrdiff_t j = jlo; j <= jhi; ++j) {
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                entry(static_cast<int>(j - i));
        }
    }
    return m;
}

}  // namespace

ComplexMatrix jordan(std::size_t n) {
    ComplexMatrix j(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        j(i, i + 1) = 1.0;
    }
    return j;
}

ComplexMatrix build(const Symbol& s, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("build: N must be >= 1");
    }
    return banded(n, s.d1(), s.d2(), [&](int k) { return s.coeff(k); });
}

ComplexMatrix build_z(const Symbol& s, Complex z, std::size_t n) {
    ComplexMatrix t = build(s, n);
    for (std::size_t i = 0; i < n; ++i) {
        t(i, i) -= z;
    }
    return t;
}

ComplexMatrix build_shifted(const Symbol& s, Complex z, ShiftSpec spec, std::size_t n) {
    if (spec.dbar1 < 0 || spec.dbar2 < 0 || spec.dbar1 + spec.dbar2 != s.degree()) {
        throw std::invalid_argument("build_shifted: need dbar1, dbar2 >= 0 with dbar1 + dbar2 = d");
    }
    if (n == 0) {
        throw std::invalid_argument("build_shifted: N must be >= 1");
    }
    const int offset = s.d1() - spec.dbar1;
    return banded(n, spec.dbar1, spec.dbar2,
                  [&](int k) { return shifted_coeff(s, z, k + offset); });
}

double bidiagonal_factor_check(const Symbol& s, Complex z, std::size_t n) {
    const RootProfile profile = root_profile(s, z);
    const std::size_t size = n + static_cast<std::size_t>(s.d2());
    // Right-multiply by (J + lambda Id): column j picks up column j-1.
    ComplexMatrix product = ComplexMatrix::identity(size);
    product *= s.coeff(s.d1());
    for (const auto& lambda : profile.roots) {
        for (std::size_t i = 0; i < size; ++i) {
            auto r = product.row(i);
            for (std::size_t j = size; j-- > 0;) {
                r[j] = lambda * r[j] + (j > 0 ? r[j - 1] : Complex{});
            }
        }
    }
    const ComplexMatrix target = build_shifted(s, z, {s.degree(), 0}, size);
    return max_abs_diff(product, target);
}

Complex trace_word(std::span<const std::size_t> m, std::span<const std::size_t> n,
                   std::size_t size) {
    if (m.size() != n.size()) {
        throw std::invalid_argument("trace_word: exponent sequences differ in length");
    }
    for (std::size_t t = 0; t < m.size(); ++t) {
        if (m[t] > size || n[t] > size) {
            throw std::invalid_argument("trace_word: exponent exceeds N");
        }
    }
    // J e_j = e_{j-1}, J* e_j = e_{j+1}; the word acts right to left.
    std::size_t count = 0;
    for (std::size_t start = 0; start < size; ++start) {
        std::size_t pos = start;
        bool alive = true;
        for (std::size_t t = m.size(); t-- > 0 && alive;) {
            if (pos + n[t] >= size) {
                alive = false;
                break;
            }
            pos += n[t];
            if (pos < m[t]) {
                alive = false;
                break;
            }
            pos -= m[t];
        }
        if (alive && pos == start) {
            ++count;
        }
    }
    return static_cast<double>(count);
}

double moment_lhs(const Symbol& s, Complex z, int k, std::size_t n) {
    if (k < 1) {
        throw std::invalid_argument("moment_lhs: k must be >= 1");
    }
    ComplexMatrix a = build_z(s, z, n);
    a *= -1.0;
    const ComplexMatrix h = multiply(a, a.adjoint());
    const int left = (k + 1) / 2;
    const int right = k - left;
    ComplexMatrix hl = h;
    for (int p = 1; p < left; ++p) {
        hl = multiply(hl, h);
    }
    Complex tr = 0.0;
    if (right == 0) {
        tr = hl.trace();
    } else {
        const ComplexMatrix hr = right == left ? hl : (right == 1 ? h : multiply(hl, h));
        // tr(Hl Hr) = sum_ij Hl_ij Hr_ji.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                tr += hl(i, j) * hr(j, i);
            }
        }
    }
    return tr.real() / static_cast<double>(n);
}

double moment_rhs(const Symbol& s, Complex z, int k) {
    if (k < 1) {
        throw std::invalid_argument("moment_rhs: k must be >= 1");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < kQuadratureNodes; ++j) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(kQuadratureNodes);
        const double r2 = std::norm(z - s.eval(std::polar(1.0, theta)));
        sum += std::pow(r2, k);
    }
    return sum / static_cast<double>(kQuadratureNodes);
}

LogDet widom_sum(const Symbol& s, Complex z, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("widom_sum: N must be >= 1");
    }
    const RootProfile profile = root_profile(s, z);
    if (profile.near_double_root) {
        throw std::domain_error("widom_sum: z is too close to a double root of P_z");
    }
    const auto& lambda = profile.roots;
    const int d = s.degree();
    const auto nd = static_cast<double>(n);
    const Complex lead = s.coeff(s.d1());

    struct Term {
        double log_abs;
        double angle;
    };
    std::vector<Term> terms;
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
        if (std::popcount(mask) != s.d1()) {
            continue;
        }
        double log_abs = nd * std::log(std::abs(lead));
        double angle = nd * std::arg(lead);
        bool vanishes = false;
        for (int j = 0; j < d && !vanishes; ++j) {
            if (!(mask & (1U << j))) {
                continue;
            }
            const Complex lj = lambda[static_cast<std::size_t>(j)];
            if (lj == Complex{}) {
                vanishes = true;
                break;
            }
            log_abs += nd * std::log(std::abs(lj));
            angle += nd * std::arg(lj);
            for (int k = 0; k < d; ++k) {
                if (mask & (1U << k)) {
                    continue;
                }
                const Complex c = lj / (lj - lambda[static_cast<std::size_t>(k)]);
                log_abs += std::log(std::abs(c));
                angle += std::arg(c);
            }
        }
        if (!vanishes) {
            terms.push_back({log_abs, std::remainder(angle, 2.0 * std::numbers::pi)});
        }
    }
    if (terms.empty()) {
        return {kLogZero, 1.0, true};
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        top = std::max(top, t.log_abs);
    }
    Complex sum = 0.0;
    for (const auto& t : terms) {
        sum += std::polar(std::exp(t.log_abs - top), t.angle);
    }
    const double mag = std::abs(sum);
    if (mag == 0.0) {
        return {kLogZero, 1.0, true};
    }
    return {top + std::log(mag), sum / mag, false};
}

}  // namespace toepspec
