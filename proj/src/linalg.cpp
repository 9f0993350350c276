#include "toepspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "toepspec/errors.hpp"
#include "toepspec/rng.hpp"

namespace toepspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

double abs1(Complex v) noexcept { return std::abs(v.real()) + std::abs(v.imag()); }

Complex unit_phase(Complex v) noexcept {
    const double a = std::abs(v);
    return a == 0.0 ? Complex{1.0} : v / a;
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (!m.is_square()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    }
}

// In-place Householder reduction to upper Hessenberg form.
void reduce_to_hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) {
        return;
    }
    std::vector<Complex> v(n);
    std::vector<Complex> s(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            xnorm2 += std::norm(h(i, k));
        }
        double tail2 = xnorm2 - std::norm(h(k + 1, k));
        if (tail2 <= 0.0) {
            continue;
        }
        const double xnorm = std::sqrt(xnorm2);
        const Complex alpha = -unit_phase(h(k + 1, k)) * xnorm;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
        }
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += std::norm(v[i]);
        }
        const double beta = 2.0 / vnorm2;

        // Left: rows k+1..n-1, columns k..n-1.
        std::fill(s.begin() + static_cast<std::ptrdiff_t>(k), s.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex cv = std::conj(v[i]);
            const auto r = h.row(i);
            for (std::size_t j = k; j < n; ++j) {
                s[j] += cv * r[j];
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = beta * v[i];
            auto r = h.row(i);
            for (std::size_t j = k; j < n; ++j) {
                r[j] -= f * s[j];
            }
        }
        // Right: all rows, columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            auto r = h.row(i);
            Complex t = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                t += r[j] * v[j];
            }
            t *= beta;
            for (std::size_t j = k + 1; j < n; ++j) {
                r[j] -= t * std::conj(v[j]);
            }
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            h(i, k) = 0.0;
        }
    }
}

struct Givens {
    double c;
    Complex s;
};

// G = [c, s; -conj(s), c] with G [x; y] = [r; 0].
Givens make_givens(Complex x, Complex y) noexcept {
    if (y == Complex{}) {
        return {1.0, 0.0};
    }
    const double ax = std::abs(x);
    const double norm = std::hypot(ax, std::abs(y));
    if (ax == 0.0) {
        return {0.0, std::conj(y) / norm};
    }
    return {ax / norm, (x / ax) * std::conj(y) / norm};
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex half = 0.5 * (a - d);
    const Complex disc = std::sqrt(half * half + b * c);
    const Complex mean = 0.5 * (a + d);
    const Complex mu1 = mean + disc;
    const Complex mu2 = mean - disc;
    return std::abs(mu1 - d) <= std::abs(mu2 - d) ? mu1 : mu2;
}

// d: diagonal, e: e[k] couples k and k+1 (e.size() == d.size(), last unused).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) {
        return;
    }
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    constexpr int kMaxSweeps = 60;
    for (int l = 0; l < n; ++l) {
        int sweeps = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (sweeps++ == kMaxSweeps) {
                throw ConvergenceError("tridiagonal QL: no convergence");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            bool underflow = false;
            for (; i >= l; --i) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace

Complex LogDet::value() const {
    if (singular) {
        return 0.0;
    }
    return phase * std::exp(log_abs);
}

LogDet lu_logdet(const ComplexMatrix& m) {
    require_square(m, "lu_logdet");
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    LogDet out;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < kTiny) {
            return {kLogZero, 1.0, true};
        }
        if (piv != k) {
            auto rk = a.row(k);
            auto rp = a.row(piv);
            std::swap_ranges(rk.begin(), rk.end(), rp.begin());
            out.phase = -out.phase;
        }
        const Complex pivot = a(k, k);
        out.log_abs += std::log(best);
        out.phase *= pivot / best;
        const auto rk = a.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            auto ri = a.row(i);
            const Complex l = ri[k] / pivot;
            if (l == Complex{}) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                ri[j] -= l * rk[j];
            }
        }
    }
    out.phase = unit_phase(out.phase);
    return out;
}

Complex determinant(const ComplexMatrix& m) { return lu_logdet(m).value(); }

SpectrumResult eigenvalues(const ComplexMatrix& m) {
    require_square(m, "eigenvalues");
    const std::size_t n = m.rows();
    if (n == 0) {
        throw std::invalid_argument("eigenvalues: empty matrix");
    }
    ComplexMatrix h = m;
    reduce_to_hessenberg(h);

    SpectrumResult out;
    out.eigenvalues.assign(n, Complex{});
    const int max_sweeps = 30 * static_cast<int>(n);
    const double small = kTiny * (static_cast<double>(n) / kEps);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int since_deflation = 0;
    while (hi >= 0) {
        // Locate the top of the unreduced block ending at hi.
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const auto k = static_cast<std::size_t>(lo);
            const double sub = abs1(h(k, k - 1));
            double ref = abs1(h(k, k)) + abs1(h(k - 1, k - 1));
            if (ref == 0.0) {
                ref = (k >= 2 ? abs1(h(k - 1, k - 2)) : 0.0) +
                      (k + 1 < n ? abs1(h(k + 1, k)) : 0.0);
            }
            if (sub <= small || sub <= kEps * ref) {
                h(k, k - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.eigenvalues[static_cast<std::size_t>(hi)] = h(static_cast<std::size_t>(hi),
                                                             static_cast<std::size_t>(hi));
            --hi;
            since_deflation = 0;
            continue;
        }
        if (out.iterations >= max_sweeps) {
            // Unconverged: report the remaining diagonal as-is.
            for (std::ptrdiff_t i = 0; i <= hi; ++i) {
                const auto u = static_cast<std::size_t>(i);
                out.eigenvalues[u] = h(u, u);
            }
            out.converged = false;
            return out;
        }
        ++out.iterations;
        ++since_deflation;

        const auto b = static_cast<std::size_t>(lo);
        const auto e = static_cast<std::size_t>(hi);
        Complex shift;
        if (since_deflation % 10 == 0) {
            shift = h(e, e) + 0.75 * abs1(h(e, e - 1));
        } else {
            shift = wilkinson_shift(h(e - 1, e - 1), h(e - 1, e), h(e, e - 1), h(e, e));
        }

        Complex x = h(b, b) - shift;
        Complex y = h(b + 1, b);
        for (std::size_t k = b; k < e; ++k) {
            const Givens g = make_givens(x, y);
            // Rows k, k+1.
            auto rk = h.row(k);
            auto rk1 = h.row(k + 1);
            for (std::size_t j = (k > b ? k - 1 : b); j <= e; ++j) {
                const Complex top = rk[j];
                const Complex bot = rk1[j];
                rk[j] = g.c * top + g.s * bot;
                rk1[j] = -std::conj(g.s) * top + g.c * bot;
            }
            if (k > b) {
                rk1[k - 1] = 0.0;
            }
            // Columns k, k+1.
            const std::size_t last = std::min(k + 2, e);
            const Complex sc = std::conj(g.s);
            for (std::size_t i = b; i <= last; ++i) {
                const Complex left = h(i, k);
                const Complex right = h(i, k + 1);
                h(i, k) = g.c * left + sc * right;
                h(i, k + 1) = -g.s * left + g.c * right;
            }
            if (k + 1 < e) {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
    }
    out.converged = true;
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& input) {
    require_square(input, "hermitian_eigenvalues");
    const std::size_t n = input.rows();
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    if (n == 0) {
        return d;
    }
    // Work on the lower triangle only.
    ComplexMatrix a = input;
    std::vector<Complex> v(n);
    std::vector<Complex> p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            xnorm2 += std::norm(a(i, k));
        }
        const double tail2 = xnorm2 - std::norm(a(k + 1, k));
        d[k] = a(k, k).real();
        if (tail2 <= 0.0) {
            e[k] = std::abs(a(k + 1, k));
            continue;
        }
        const Complex alpha = -unit_phase(a(k + 1, k)) * std::sqrt(xnorm2);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k);
        }
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += std::norm(v[i]);
        }
        const double beta = 2.0 / vnorm2;

        // p = beta * A22 v using the lower triangle of A22.
        std::fill(p.begin() + static_cast<std::ptrdiff_t>(k + 1), p.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) {
            const auto ri = a.row(i);
            Complex acc = ri[i].real() * v[i];
            const Complex vi = v[i];
            for (std::size_t j = k + 1; j < i; ++j) {
                acc += ri[j] * v[j];
                p[j] += std::conj(ri[j]) * vi;
            }
            p[i] += acc;
        }
        Complex vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            p[i] *= beta;
            vp += std::conj(v[i]) * p[i];
        }
        const double kappa = 0.5 * beta * vp.real();
        for (std::size_t i = k + 1; i < n; ++i) {
            p[i] -= kappa * v[i];  // p is now w
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            auto ri = a.row(i);
            const Complex vi = v[i];
            const Complex wi = p[i];
            for (std::size_t j = k + 1; j <= i; ++j) {
                ri[j] -= vi * std::conj(p[j]) + wi * std::conj(v[j]);
            }
        }
        e[k] = std::abs(alpha);
    }
    if (n >= 2) {
        d[n - 2] = a(n - 2, n - 2).real();
        e[n - 2] = std::abs(a(n - 1, n - 2));
    }
    d[n - 1] = a(n - 1, n - 1).real();
    tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    require_square(m, "singular_values");
    const std::size_t n = m.rows();
    ComplexMatrix sym(2 * n, 2 * n);
    // Lower triangle of [[0, M], [M*, 0]] is the M* block.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            sym(n + j, i) = std::conj(m(i, j));
            sym(i, n + j) = m(i, j);
        }
    }
    const std::vector<double> spectrum = hermitian_eigenvalues(sym);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(std::abs(spectrum[2 * n - 1 - k]));
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Complex stieltjes(std::span<const double> sv, Complex xi) {
    if (xi.imag() == 0.0) {
        throw std::domain_error("stieltjes: xi must have nonzero imaginary part");
    }
    if (sv.empty()) {
        throw std::invalid_argument("stieltjes: empty spectrum");
    }
    Complex sum = 0.0;
    for (const double s : sv) {
        sum += 1.0 / (xi - s) + 1.0 / (xi + s);
    }
    return sum / (2.0 * static_cast<double>(sv.size()));
}

Complex stieltjes(const ComplexMatrix& m, Complex xi) {
    if (xi.imag() == 0.0) {
        throw std::domain_error("stieltjes: xi must have nonzero imaginary part");
    }
    const auto sv = singular_values(m);
    return stieltjes(sv, xi);
}

double hs_norm(const ComplexMatrix& m) {
    double sum = 0.0;
    for (const auto& v : m.data()) {
        sum += std::norm(v);
    }
    return std::sqrt(sum);
}

double op_norm_est(const ComplexMatrix& m, int iters) {
    if (iters < 1) {
        throw std::invalid_argument("op_norm_est: iters must be >= 1");
    }
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows == 0 || cols == 0) {
        return 0.0;
    }
    std::vector<Complex> v(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(rows);
        v[i] = std::polar(1.0 + 0.5 * t, 0.7 * t);
    }
    auto normalize = [](std::vector<Complex>& x) {
        double s = 0.0;
        for (const auto& c : x) {
            s += std::norm(c);
        }
        s = std::sqrt(s);
        if (s > 0.0) {
            for (auto& c : x) {
                c /= s;
            }
        }
        return s;
    };
    normalize(v);
    std::vector<Complex> w(cols);
    double best = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::fill(w.begin(), w.end(), Complex{});
        for (std::size_t i = 0; i < rows; ++i) {
            const auto r = m.row(i);
            for (std::size_t j = 0; j < cols; ++j) {
                w[j] += std::conj(r[j]) * v[i];
            }
        }
        const double sigma = normalize(w);
        best = std::max(best, sigma);
        if (sigma == 0.0) {
            break;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            const auto r = m.row(i);
            Complex acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) {
                acc += r[j] * w[j];
            }
            v[i] = acc;
        }
        if (normalize(v) == 0.0) {
            break;
        }
    }
    return best;
}

double smin(const ComplexMatrix& m) {
    require_square(m, "smin");
    if (m.rows() == 0) {
        return 0.0;
    }
    return singular_values(m).back();
}

ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("haar_unitary: n must be >= 1");
    }
    const CounterRng rng(derive_seed(seed, 0x68616172ULL));
    // Columns of the Ginibre matrix, orthonormalized by Gram-Schmidt applied
    // twice; R then has a positive real diagonal.
    std::vector<std::vector<Complex>> q(n, std::vector<Complex>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            q[j][i] = rng.complex_normal(i * n + j);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        auto& col = q[j];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    proj += std::conj(q[k][i]) * col[i];
                }
                for (std::size_t i = 0; i < n; ++i) {
                    col[i] -= proj * q[k][i];
                }
            }
        }
        double norm2 = 0.0;
        for (const auto& c : col) {
            norm2 += std::norm(c);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : col) {
            c *= inv;
        }
    }
    ComplexMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            u(i, j) = q[j][i];
        }
    }
    return u;
}

}  // namespace toepspec
