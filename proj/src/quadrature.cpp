#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace bergman {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFn& f, double a, double b, int& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double k15 = kWgk[7] * f0;
    double g7 = kWg[3] * f0;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double y = f(mid + dx) + f(mid - dx);
        k15 += kWgk[i] * y;
        if (i % 2 == 1) g7 += kWg[i / 2] * y;
    }
    evals += 15;
    k15 *= half;
    g7 *= half;
    double err = std::abs(k15 - g7);
    if (!std::isfinite(k15)) err = std::numeric_limits<double>::infinity();
    return {a, b, k15, err};
}

} // namespace

IntegralResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    IntegralResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Segment> queue;
    queue.push(gk15(f, a, b, res.evaluations));
    double total = queue.top().value;
    double total_err = queue.top().error;
    int splits = 0;
    while (total_err > std::max(spec.rel_tol * std::abs(total), spec.abs_floor)) {
        if (splits >= spec.max_subdivisions || queue.empty()) {
            res.value = total;
            res.abs_error = total_err;
            return res;
        }
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            if (!std::isfinite(worst.error)) {
                // non-finite samples at double resolution cannot be refined away
                res.value = total;
                res.abs_error = total_err;
                return res;
            }
            // interval is at double resolution; accept its estimate as-is
            total_err -= worst.error;
            continue;
        }
        Segment left = gk15(f, worst.a, mid, res.evaluations);
        Segment right = gk15(f, mid, worst.b, res.evaluations);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
    res.value = total;
    res.abs_error = total_err;
    res.converged = true;
    return res;
}

double integrate_or_throw(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    IntegralResult r = integrate(f, a, b, spec);
    if (!r.converged)
        throw AccuracyError("quadrature did not converge", r.value, r.abs_error);
    return r.value;
}

LogIntegralResult log_integrate(const RealFn& log_f, double a, double b, double peak,
                                const QuadratureSpec& spec) {
    LogIntegralResult out;
    if (!(a < b)) {
        out.converged = true;
        return out;
    }
    peak = std::clamp(peak, a, b);
    double shift = log_f(peak);
    // probe the immediate neighbourhood in case `peak` sits on a -inf spot
    if (!std::isfinite(shift)) {
        for (double t : {a + 0.25 * (b - a), 0.5 * (a + b), a + 0.75 * (b - a)})
            shift = std::max(shift, log_f(t));
        if (!std::isfinite(shift)) return out; // integrand is identically zero
    }
    const double cutoff = shift - 745.0;
    auto shifted = [&](double t) {
        const double v = log_f(t);
        return v > cutoff ? std::exp(v - shift) : 0.0;
    };
    // trim the domain to where the shifted integrand is non-negligible; keeps the
    // adaptive splitter from spending its budget on dead stretches
    const double lo = (log_f(a) > cutoff) ? a : log_support_edge(log_f, peak, a, cutoff);
    const double hi = (log_f(b) > cutoff) ? b : log_support_edge(log_f, peak, b, cutoff);
    IntegralResult base = integrate(shifted, lo, hi, spec);
    out.evaluations = base.evaluations;
    out.converged = base.converged;
    if (base.value <= 0.0) {
        out.converged = base.converged;
        return out;
    }
    out.log_value = shift + std::log(base.value);
    out.rel_error = base.abs_error / base.value;
    return out;
}

double find_log_peak(const RealFn& log_f, const std::vector<double>& seeds) {
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
        const double v = log_f(seeds[i]);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const double lo = seeds[std::max(0, best - 1)];
    const double hi = seeds[std::min<int>(seeds.size() - 1, best + 1)];
    if (lo >= hi) return seeds[best];
    return golden_max(log_f, lo, hi);
}

double golden_max(const RealFn& f, double lo, double hi, int iters) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

double bisect(const RealFn& f, double lo, double hi, int iters) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double log_support_edge(const RealFn& log_f, double from, double direction_limit,
                        double threshold) {
    if (from == direction_limit) return from;
    // geometric march from `from` towards the limit until below threshold
    double prev = from;
    for (int k = 1; k <= 64; ++k) {
        const double frac = std::pow(2.0, -double(64 - k)); // 2^-63 ... 1
        const double t = from + frac * (direction_limit - from);
        if (log_f(t) < threshold)
            return bisect([&](double u) { return log_f(u) - threshold; },
                          std::min(prev, t), std::max(prev, t), 100);
        prev = t;
    }
    return direction_limit;
}

} // namespace bergman
