#include "ssm/specfun.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace ssm {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes at working precision.
// Newton on P_n via the three-term recurrence; double-precision Chebyshev
// initial guesses converge in a handful of iterations.

const std::vector<std::pair<Real, Real>>& GaussLegendre::rule(int order) {
    static thread_local std::map<std::pair<int, unsigned>,
                                 std::vector<std::pair<Real, Real>>>
        cache;
    unsigned digits = policy().working_digits;
    auto key = std::make_pair(order, digits);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::pair<Real, Real>> rule;
    rule.reserve(order);
    Real tol = pow(Real(10), -(int)digits - 5);
    for (int i = 1; 2 * i <= order + 1; ++i) {
        // nodes are symmetric; compute the non-negative half
        Real x = Real(std::cos(3.14159265358979324 * (i - 0.25) / (order + 0.5)));
        Real dp(0);
        for (int iter = 0; iter < 200; ++iter) {
            // evaluate P_n(x) and P_n'(x)
            Real p0(1), p1 = x;
            for (int j = 2; j <= order; ++j) {
                Real p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1);
            Real step = p1 / dp;
            x -= step;
            if (abs(step) < tol) break;
        }
        Real w = 2 / ((1 - x * x) * dp * dp);
        rule.emplace_back(x, w);
        if (x != 0) rule.emplace_back(-x, w);
    }
    std::sort(rule.begin(), rule.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto res = cache.emplace(key, std::move(rule));
    return res.first->second;
}

// ---------------------------------------------------------------------------

namespace {

// integral of f over the straight segment [z0, z1] (one GL panel)
Complex segment(const std::function<Complex(const Complex&)>& f,
                const Complex& z0, const Complex& z1, int order) {
    const auto& gl = GaussLegendre::rule(order);
    Complex mid = (z0 + z1) * Complex(Real(1) / 2);
    Complex half = (z1 - z0) * Complex(Real(1) / 2);
    Complex acc(0);
    for (const auto& [x, w] : gl) {
        Complex z = mid + Complex(x) * half;
        acc += Complex(w) * f(z);
    }
    return acc * half;
}

// adaptive outward ray: integral from `start` to infinity along `dir`
// (|dir| = 1), extended until the contributions die out
Complex ray(const std::function<Complex(const Complex&)>& f,
            const Complex& start, const Complex& dir, const Real& step,
            int order, const Real& abs_tol) {
    Complex acc(0);
    Complex a = start;
    int quiet = 0;
    for (int m = 0; m < 4000; ++m) {
        Complex b = a + Complex(step) * dir;
        Complex piece = segment(f, a, b, order);
        acc += piece;
        if (abs(piece) < abs_tol / 8) {
            if (++quiet >= 2) return acc;
        } else {
            quiet = 0;
        }
        a = b;
    }
    throw precision_failure("line_integral: wing did not converge");
}

} // namespace

Complex line_integral_once(const std::function<Complex(const Complex&)>& f,
                           const ContourSpec& spec_in, int panels,
                           bool conj_symmetric) {
    if (!(spec_in.height > 0) || panels < 1)
        throw contour_error("line_integral: bad contour spec");
    int order = std::clamp((int)policy().working_digits, 20, 90);
    Real abs_tol = Real(policy().target_abs_tol);
    // re-seat the caller's contour data at working precision: panel endpoints
    // derived from low-precision Reals would put a noise floor under the
    // refinement loop
    ContourSpec sp = spec_in;
    sp.sigma = lift_precision(spec_in.sigma);
    sp.height = lift_precision(spec_in.height);
    Real step = sp.height / panels;
    Real pi = const_pi();

    auto upper_half = [&]() {
        Complex acc(0);
        for (int j = 0; j < panels; ++j) {
            Complex z0(sp.sigma, step * j);
            Complex z1(sp.sigma, step * (j + 1));
            acc += segment(f, z0, z1, order);
        }
        if (sp.wings != 0) {
            Real s = sqrt(Real(1) / 2);
            Complex dir = sp.wings < 0 ? Complex(-s, s) : Complex(s, s);
            Complex start(sp.sigma, sp.height);
            acc += ray(f, start, dir, std::max(step, Real(1)), order, abs_tol);
        }
        return acc;
    };

    Complex up = upper_half();
    if (conj_symmetric) {
        // contour value = (up - conj(up)) / (2 pi i) = Im(up)/pi, real
        return Complex(up.im / pi);
    }
    // lower half, oriented upward (toward the vertical line)
    Complex low(0);
    for (int j = panels; j > 0; --j) {
        Complex z0(sp.sigma, -step * j);
        Complex z1(sp.sigma, -step * (j - 1));
        low += segment(f, z0, z1, order);
    }
    if (sp.wings != 0) {
        Real s = sqrt(Real(1) / 2);
        Complex dir = sp.wings < 0 ? Complex(-s, -s) : Complex(s, -s);
        Complex start(sp.sigma, -sp.height);
        // ray computed outward; the contour traverses it inward
        low -= ray(f, start, dir, std::max(step, Real(1)), order, abs_tol);
    }
    Complex total = up + low;
    // divide by 2 pi i
    return Complex(total.im, -total.re) / Complex(2 * pi);
}

Complex line_integral(const std::function<Complex(const Complex&)>& f,
                      const ContourSpec& spec, bool conj_symmetric) {
    int panels = std::max(spec.panels, 1);
    Real abs_tol = Real(policy().target_abs_tol);
    Complex prev = line_integral_once(f, spec, panels, conj_symmetric);
    for (int p = panels * 2; p <= 1024; p *= 2) {
        Complex cur = line_integral_once(f, spec, p, conj_symmetric);
        if (abs(cur - prev) <= abs_tol) return cur;
        prev = cur;
    }
    throw precision_failure("line_integral: refinement did not converge");
}

} // namespace ssm
