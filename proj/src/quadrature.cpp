#include "emvac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <queue>

namespace emvac {

namespace {

std::function<void(const std::string&)>& warning_handler() {
    static std::function<void(const std::string&)> handler =
        [](const std::string& msg) { std::cerr << "[emvac] warning: " << msg << "\n"; };
    return handler;
}
std::mutex warn_mutex;

// Gauss-Kronrod 7/15 nodes and weights (positive half, node 0 last).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    cdouble value;
    double err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

Interval gk15(const std::function<cdouble(double)>& f, double a, double b,
              long& n_evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cdouble kron = wgk[7] * f(c);
    cdouble gauss = wg[3] * f(c);
    n_evals += 1;
    for (int j = 0; j < 7; ++j) {
        const cdouble lo = f(c - h * xgk[j]);
        const cdouble hi = f(c + h * xgk[j]);
        n_evals += 2;
        kron += wgk[j] * (lo + hi);
        if (j % 2 == 1) gauss += wg[j / 2] * (lo + hi);
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

void warn(const std::string& msg) {
    std::lock_guard<std::mutex> lock(warn_mutex);
    warning_handler()(msg);
}

void set_warning_handler(std::function<void(const std::string&)> handler) {
    std::lock_guard<std::mutex> lock(warn_mutex);
    warning_handler() = std::move(handler);
}

IntegralResult integrate_gk(const std::function<cdouble(double)>& f, double a,
                            double b, double rel_tol, int max_subdivisions,
                            std::vector<double> breakpoints) {
    if (!(b > a)) throw ConfigError("integrate_gk: requires b > a");

    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(
        std::unique(breakpoints.begin(), breakpoints.end()),
        breakpoints.end());

    long n_evals = 0;
    std::priority_queue<Interval> heap;
    int n_intervals = 0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (hi <= a || lo >= b || hi - lo <= 0.0) continue;
        heap.push(gk15(f, std::max(lo, a), std::min(hi, b), n_evals));
        ++n_intervals;
    }

    auto totals = [&heap]() {
        // heap copies are cheap relative to integrand cost at our sizes
        cdouble val = 0.0;
        double err = 0.0, l1 = 0.0;
        std::priority_queue<Interval> copy = heap;
        while (!copy.empty()) {
            val += copy.top().value;
            err += copy.top().err;
            l1 += std::abs(copy.top().value);
            copy.pop();
        }
        return std::tuple<cdouble, double, double>{val, err, l1};
    };

    while (true) {
        auto [val, err, l1] = totals();
        const double target = rel_tol * std::max(std::abs(val), 1e-6 * l1) + 1e-300;
        if (err <= target) {
            return {val, err, n_evals, n_intervals, 0.0, false};
        }
        if (n_intervals >= max_subdivisions) {
            throw QuadratureError(
                "integrate_gk: interval budget exhausted (err=" +
                    std::to_string(err) + ", target=" + std::to_string(target) + ")",
                val, err);
        }
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval at floating-point resolution; accept its value as is
            worst.err = 0.0;
            heap.push(worst);
            continue;
        }
        heap.push(gk15(f, worst.a, mid, n_evals));
        heap.push(gk15(f, mid, worst.b, n_evals));
        ++n_intervals;
    }
}

IntegralResult radial_integral(const std::function<cdouble(double, double)>& f,
                               const QuadratureSpec& spec, double k,
                               std::vector<double> poles) {
    spec.validate();
    if (!(k > 0.0)) throw ConfigError("radial_integral: k must be > 0");
    if (poles.empty()) poles.push_back(k);

    auto seed_breakpoints = [&](double eta) {
        std::vector<double> bp;
        for (double p : poles) {
            if (!(p > 0.0) || p >= spec.q_max) continue;
            bp.push_back(p);
            const double wide = 0.1 * p;
            const double tight = p * std::max(50.0 * eta, 1e-9);
            for (double w : {wide, 0.01 * p, tight}) {
                bp.push_back(p - w);
                bp.push_back(p + w);
            }
        }
        return bp;
    };

    auto run = [&](double eta) {
        auto g = [&](double q) {
            return (q * q / (2.0 * pi * pi)) * f(q, eta);
        };
        return integrate_gk(g, 0.0, spec.q_max, spec.rel_tol,
                            spec.max_subdivisions, seed_breakpoints(eta));
    };

    if (spec.eta == 0.0) {
        IntegralResult r = run(0.0);
        return r;
    }

    const IntegralResult full = run(spec.eta);
    const IntegralResult half = run(0.5 * spec.eta);
    IntegralResult out;
    out.value = 2.0 * half.value - full.value;
    // residual after removing the O(eta) term is O(eta^2); estimate it from
    // the observed first-order difference
    out.error_estimate = full.error_estimate + 2.0 * half.error_estimate +
                         2.0 * spec.eta * std::abs(half.value - full.value);
    out.n_evals = full.n_evals + half.n_evals;
    out.n_intervals = full.n_intervals + half.n_intervals;
    out.eta_used = spec.eta;
    out.extrapolated = true;
    return out;
}

}  // namespace emvac
