// quadrature.hpp - 21-point Gauss-Kronrod panel rule and a globally adaptive driver
// for complex-valued integrands.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "magnon/units.hpp"

namespace magnon::quad {

namespace detail {
// Abscissae of the 21-point Kronrod rule; odd indices are the 10-point Gauss nodes.
inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
}  // namespace detail

struct PanelEstimate {
    cplx value{};
    double error{};
};

/// One Gauss-Kronrod 10/21 evaluation on [a, b]; endpoints are never sampled.
template <class F>
PanelEstimate gauss_kronrod21(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kronrod = fc * detail::wgk[10];
    cplx gauss{0.0, 0.0};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * detail::xgk[j];
        const cplx sum = f(center - dx) + f(center + dx);
        kronrod += detail::wgk[j] * sum;
        if (j % 2 == 1) gauss += detail::wg[j / 2] * sum;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct Panel {
    double a{};
    double b{};
    int segment{};   ///< caller-defined tag (e.g. which substitution applies)
    cplx value{};
    double error{};
};

struct AdaptiveResult {
    cplx value{};
    double error{};
    std::size_t panels{};
    bool converged{};
};

/// Global adaptive refinement: repeatedly bisects the panel with the largest error
/// until sum(error) <= max(abs_tol, rel_tol |sum(value)|) or `max_panels` is reached.
/// `eval(segment, a, b)` returns the panel estimate. Final summation runs over the
/// panels in (segment, a) order so the result is independent of refinement history.
template <class Eval>
AdaptiveResult integrate_adaptive(Eval&& eval, std::vector<Panel> panels, double rel_tol, double abs_tol,
                                  std::size_t max_panels) {
    auto worse = [&](std::size_t lhs, std::size_t rhs) {
        if (panels[lhs].error != panels[rhs].error) return panels[lhs].error < panels[rhs].error;
        return lhs > rhs;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto est = eval(panels[i].segment, panels[i].a, panels[i].b);
        panels[i].value = est.value;
        panels[i].error = est.error;
        heap.push(i);
    }

    auto totals = [&] {
        cplx v{};
        double e = 0.0;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    std::size_t since_resum = 0;
    while (!heap.empty() && error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (panels.size() >= max_panels) break;
        const std::size_t worst = heap.top();
        heap.pop();
        Panel left = panels[worst];
        const double mid = 0.5 * (left.a + left.b);
        if (!(mid > left.a && mid < left.b)) continue;  // exhausted floating-point resolution
        Panel right = left;
        left.b = mid;
        right.a = mid;
        const auto el = eval(left.segment, left.a, left.b);
        const auto er = eval(right.segment, right.a, right.b);
        left.value = el.value;
        left.error = el.error;
        right.value = er.value;
        right.error = er.error;
        value += left.value + right.value - panels[worst].value;
        error += left.error + right.error - panels[worst].error;
        panels[worst] = left;
        panels.push_back(right);
        heap.push(worst);
        heap.push(panels.size() - 1);
        // Running sums drift; recompute periodically.
        if (++since_resum == 64) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }

    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) {
        return l.segment != r.segment ? l.segment < r.segment : l.a < r.a;
    });
    std::tie(value, error) = totals();
    return {value, error, panels.size(), error <= std::max(abs_tol, rel_tol * std::abs(value))};
}

}  // namespace magnon::quad
