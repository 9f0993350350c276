#include "toepspec/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace toepspec {

double mean_abs_diff(std::span<const Complex> p, std::span<const Complex> q) {
    if (p.empty() || q.empty()) {
        throw std::invalid_argument("mean_abs_diff: empty sample");
    }
    double total = 0.0;
    for (const auto& a : p) {
        double row = 0.0;
        for (const auto& b : q) {
            row += std::abs(a - b);
        }
        total += row;
    }
    return total / (static_cast<double>(p.size()) * static_cast<double>(q.size()));
}

double energy_distance(std::span<const Complex> p, std::span<const Complex> q) {
    return energy_distance(p, q, mean_abs_diff(q, q));
}

double energy_distance(std::span<const Complex> p, std::span<const Complex> q, double q_self) {
    const double d = 2.0 * mean_abs_diff(p, q) - mean_abs_diff(p, p) - q_self;
    return std::max(d, 0.0);
}

double ks_distance(std::span<const double> p, std::span<const double> q) {
    if (p.empty() || q.empty()) {
        throw std::invalid_argument("ks_distance: empty sample");
    }
    std::vector<double> a(p.begin(), p.end());
    std::vector<double> b(q.begin(), q.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace toepspec
