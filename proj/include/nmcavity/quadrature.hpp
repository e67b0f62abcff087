// quadrature.hpp — Globally adaptive 21-point Gauss-Kronrod integration

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "nmcavity/error.hpp"

namespace nmcavity::quad {

struct Options {
    double rel_tol{1e-10};
    double abs_tol{0.0};
    std::size_t max_subdivisions{10000};
};

struct Result {
    double value{0.0};
    double error{0.0};
    std::size_t intervals{0};
};

namespace detail {

// Abscissae and weights of the 10-point Gauss / 21-point Kronrod pair (QUADPACK qk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double res_k = fc * kWgk[10];
    double res_g = 0.0;
    double res_abs = std::abs(res_k);
    double fv1[10];
    double fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double pair = fv1[j] + fv2[j];
        res_k += kWgk[j] * pair;
        res_abs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) res_g += kWg[j / 2] * pair;
    }

    const double mean = 0.5 * res_k;
    double res_asc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }

    const double scale = std::abs(half);
    res_k *= half;
    res_g *= half;
    res_abs *= scale;
    res_asc *= scale;

    double err = std::abs(res_k - res_g);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * res_abs, err);
    }
    return {a, b, res_k, err};
}

} // namespace detail

/// Integrates f over the partition given by `breakpoints` (sorted, at least two entries).
/// Segments are bisected worst-error-first until the summed error estimate
/// meets max(abs_tol, rel_tol*|I|). Throws QuadratureNonConvergence when the
/// partition would exceed opts.max_subdivisions.
template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& opts = {}) {
    if (breakpoints.size() < 2) return {};
    if (breakpoints.size() - 1 > opts.max_subdivisions) {
        throw QuadratureNonConvergence("initial partition has " +
                                       std::to_string(breakpoints.size() - 1) +
                                       " segments, above the subdivision limit");
    }

    std::priority_queue<detail::Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        auto seg = detail::gauss_kronrod21(f, breakpoints[i], breakpoints[i + 1]);
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (!heap.empty() && total_err > target()) {
        if (heap.size() >= opts.max_subdivisions) {
            throw QuadratureNonConvergence("error estimate " + std::to_string(total_err) +
                                           " above target " + std::to_string(target()) +
                                           " after " + std::to_string(heap.size()) +
                                           " subdivisions");
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            throw QuadratureNonConvergence("segment width reached floating-point resolution");
        }
        heap.pop();
        auto left = detail::gauss_kronrod21(f, worst.a, mid);
        auto right = detail::gauss_kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in left-to-right order so the result does not carry the
    // incremental update drift.
    std::vector<detail::Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const auto& x, const auto& y) { return x.a < y.a; });
    Result out;
    out.intervals = segments.size();
    for (const auto& s : segments) {
        out.value += s.value;
        out.error += s.error;
    }
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    const double pts[2] = {a, b};
    return integrate(std::forward<F>(f), std::span<const double>(pts, 2), opts);
}

} // namespace nmcavity::quad
