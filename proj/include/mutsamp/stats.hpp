#pragma once

// Correlation coefficients used for representativeness. Both return an empty
// optional when the coefficient is undefined (a constant input vector), so
// callers can exclude those cases from averages instead of coercing them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace mutsamp {

class StatsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_paired(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatsError("correlation inputs differ in length");
    if (x.size() < 2) throw StatsError("correlation needs at least two observations");
}

// Counts inversions in v (pairs i<j with v[i] > v[j]) by merge sort.
inline std::uint64_t count_inversions(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    inversions += mid - a;
                    buf[out++] = v[b++];
                } else {
                    buf[out++] = v[a++];
                }
            }
            while (a < mid) buf[out++] = v[a++];
            while (b < hi) buf[out++] = v[b++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

} // namespace detail

// Product-moment coefficient over centered sums. Element-wise identical
// inputs short-circuit to 1 (their correlation is exactly 1; the float
// formula may round below it).
inline std::optional<double> pearson_rho(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y);
    const std::size_t n = x.size();
    const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    if (std::equal(x.begin(), x.end(), y.begin())) return 1.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

// Tie-adjusted tau_b: (C - D) / sqrt((n0 - n1)(n0 - n2)). Discordant pairs
// are counted as inversions of y after sorting by (x, y); ties are counted
// from run lengths.
inline std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    detail::check_paired(x, y);
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    auto pairs_of = [](std::uint64_t run) { return run * (run - 1) / 2; };
    std::uint64_t ties_x = 0, ties_both = 0;
    std::uint64_t run_x = 1, run_xy = 1;
    std::vector<double> y_sorted(n);
    y_sorted[0] = y[order[0]];
    for (std::size_t i = 1; i < n; ++i) {
        y_sorted[i] = y[order[i]];
        if (x[order[i]] == x[order[i - 1]]) {
            ++run_x;
            if (y[order[i]] == y[order[i - 1]]) {
                ++run_xy;
            } else {
                ties_both += pairs_of(run_xy);
                run_xy = 1;
            }
        } else {
            ties_x += pairs_of(run_x);
            ties_both += pairs_of(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    ties_x += pairs_of(run_x);
    ties_both += pairs_of(run_xy);

    std::uint64_t ties_y = 0;
    {
        std::vector<double> ys(y.begin(), y.end());
        std::sort(ys.begin(), ys.end());
        std::uint64_t run = 1;
        for (std::size_t i = 1; i < n; ++i) {
            if (ys[i] == ys[i - 1]) {
                ++run;
            } else {
                ties_y += pairs_of(run);
                run = 1;
            }
        }
        ties_y += pairs_of(run);
    }

    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (ties_x == n0 || ties_y == n0) return std::nullopt; // constant vector

    const std::uint64_t discordant = detail::count_inversions(y_sorted);
    // concordant + discordant = pairs not tied in either vector
    const std::uint64_t untied = n0 - ties_x - ties_y + ties_both;
    const double numerator =
        static_cast<double>(untied) - 2.0 * static_cast<double>(discordant);
    // (n0-n1)(n0-n2) stays an exact double for any realistic vector length
    const double denominator = std::sqrt(static_cast<double>(n0 - ties_x) *
                                         static_cast<double>(n0 - ties_y));
    return std::clamp(numerator / denominator, -1.0, 1.0);
}

// Smallest |rho| significant at two-sided level alpha for sample size n,
// via the Fisher z approximation. Informational only.
inline std::optional<double> pearson_significance_threshold(std::size_t n, double z_alpha) {
    if (n < 4) return std::nullopt;
    return std::tanh(z_alpha / std::sqrt(static_cast<double>(n - 3)));
}

// Same idea for tau under its large-sample normal approximation.
inline std::optional<double> kendall_significance_threshold(std::size_t n, double z_alpha) {
    if (n < 3) return std::nullopt;
    const double dn = static_cast<double>(n);
    const double sigma = std::sqrt(2.0 * (2.0 * dn + 5.0) / (9.0 * dn * (dn - 1.0)));
    const double t = z_alpha * sigma;
    return t < 1.0 ? std::optional<double>(t) : std::nullopt;
}

// z for a two-sided 0.01 test.
inline constexpr double kZForP01 = 2.5758293035489004;

} // namespace mutsamp
