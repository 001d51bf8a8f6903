#pragma once

// Traveling/standing wave construction: admissible speed, existence gate,
// monotone profile by RK4 integration of the factorized first-order ODE
//   v' = a(v)^{1/2} (v+ - v)^{m1} (v - v_-)^{m2},
// and tail decay-rate fits.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pfwave/elastic.hpp"
#include "pfwave/errors.hpp"
#include "pfwave/fitting.hpp"
#include "pfwave/interp.hpp"
#include "pfwave/model.hpp"
#include "pfwave/potential.hpp"

namespace pfwave {

struct WaveProfile {
    std::vector<double> xi; // uniform, ascending, anchored at xi = 0
    std::vector<double> v;  // strictly increasing, inside (v_minus, v_plus)
    std::vector<double> dv; // grid derivative (widened 4th-order stencils)
    double s = 0.0;         // wave speed tag
    WaveFamily family = WaveFamily::nonconserved;
    double anchor_value = 0.0; // v at xi = 0
    double dx = 0.0;
    int stencil_stride = 1;
    // A side is truncated when the state reaches a well to within double
    // precision before the requested half-width.
    bool truncated_left = false;
    bool truncated_right = false;

    double xi_min() const { return xi.front(); }
    double xi_max() const { return xi.back(); }
    MonotoneCubic interpolant() const { return MonotoneCubic::fit(xi, v); }
};

// Admissible speed of a wave connecting the two minima. Nonconserved waves
// move at -(alpha*T11 + beta); conserved waves must stand still.
inline double wave_speed(double mu, const DoubleWell& well, WaveFamily family) {
    well.require_equal_wells();
    return family == WaveFamily::conserved ? 0.0 : -mu;
}

inline double wave_speed(const ReducedCoefficients& rc, double t11, const DoubleWell& well,
                         WaveFamily family) {
    return wave_speed(rc.alpha * t11 + rc.beta, well, family);
}

struct GateReport {
    enum class Clause { none, unequal_wells, nonzero_mu };
    bool pass = false;
    Clause failed_clause = Clause::none;
    double gap = 0.0;
    double mu = 0.0;
};

inline std::string to_string(GateReport::Clause c) {
    switch (c) {
        case GateReport::Clause::none: return "none";
        case GateReport::Clause::unequal_wells: return "unequal_wells";
        case GateReport::Clause::nonzero_mu: return "nonzero_mu";
    }
    return "?";
}

// Whether a wave connecting the minima can exist for the given model.
// Every model needs equal well heights; the classic nonconserved equation
// additionally requires mu = 0 (flat tails are stationary only then).
inline GateReport existence_gate(const DoubleWell& well, double mu, ModelKind kind) {
    GateReport r;
    r.gap = well.well_gap();
    r.mu = mu;
    if (!well.equal_wells()) {
        r.failed_clause = GateReport::Clause::unequal_wells;
        return r;
    }
    if (kind == ModelKind::classic_ac && std::abs(mu) > 1e-12) {
        r.failed_clause = GateReport::Clause::nonzero_mu;
        return r;
    }
    r.pass = true;
    return r;
}

struct ProfileOptions {
    // Value pinned at xi = 0; defaults to the interior maximum v*.
    double anchor_value = std::numeric_limits<double>::quiet_NaN();
    double speed = 0.0; // stored in the result, does not affect the shape
};

namespace detail {

// 4th-order derivative stencils with node stride s. Widening the spacing
// keeps the stencil truncation above double-precision roundoff, so the
// stored derivative (and the first-integral residual built from it) sharpens
// at the integrator's order when dx is refined instead of drowning in noise.
inline std::vector<double> strided_derivative(const std::vector<double>& v, double dx, int s) {
    const long n = static_cast<long>(v.size());
    std::vector<double> dv(v.size());
    for (long i = 0; i < n; ++i) {
        long si = s;
        // shrink the stride where the grid runs out of room
        const long room = std::max(std::min(i, n - 1 - i), (n - 1) / 4);
        si = std::max(1L, std::min(si, room));
        const double h = 12.0 * static_cast<double>(si) * dx;
        if (i - 2 * si >= 0 && i + 2 * si < n) {
            dv[static_cast<size_t>(i)] =
                (v[static_cast<size_t>(i - 2 * si)] - 8.0 * v[static_cast<size_t>(i - si)] +
                 8.0 * v[static_cast<size_t>(i + si)] - v[static_cast<size_t>(i + 2 * si)]) / h;
        } else if (i + 4 * si < n) {
            dv[static_cast<size_t>(i)] =
                (-25.0 * v[static_cast<size_t>(i)] + 48.0 * v[static_cast<size_t>(i + si)] -
                 36.0 * v[static_cast<size_t>(i + 2 * si)] +
                 16.0 * v[static_cast<size_t>(i + 3 * si)] -
                 3.0 * v[static_cast<size_t>(i + 4 * si)]) / h;
        } else if (i - 4 * si >= 0) {
            dv[static_cast<size_t>(i)] =
                (25.0 * v[static_cast<size_t>(i)] - 48.0 * v[static_cast<size_t>(i - si)] +
                 36.0 * v[static_cast<size_t>(i - 2 * si)] -
                 16.0 * v[static_cast<size_t>(i - 3 * si)] +
                 3.0 * v[static_cast<size_t>(i - 4 * si)]) / h;
        } else {
            // grid too short for this stride anywhere near i
            dv[static_cast<size_t>(i)] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return dv;
}

} // namespace detail

// Max-norm residual of the first integral (1/2) dv^2 = f(v) - f(v+) over the
// stored nodes.
inline double profile_ode_residual(const WaveProfile& p, const DoubleWell& well) {
    const double f_plus = well.value(well.v_plus());
    double r = 0.0;
    for (size_t i = 0; i < p.v.size(); ++i) {
        const double res = std::abs(0.5 * p.dv[i] * p.dv[i] - (well.value(p.v[i]) - f_plus));
        r = std::max(r, res);
    }
    return r;
}

// Integrates the factorized profile ODE with classical RK4 from the anchor,
// forward to +half_width and backward to -half_width on a uniform grid.
// A march stops early (truncating that side) once the state is within
// double-precision reach of a well; a monotonicity failure away from the
// wells reports StepTooLarge instead.
inline WaveProfile solve_profile(const DoubleWell& well, double half_width, double dx,
                                 WaveFamily family, const ProfileOptions& opts = {}) {
    well.require_equal_wells();
    if (!(half_width > 0.0) || !(dx > 0.0))
        throw std::invalid_argument("solve_profile: half_width and dx must be positive");

    const double v_lo = well.v_minus(), v_hi = well.v_plus();
    const double span = well.span();
    double anchor = opts.anchor_value;
    if (std::isnan(anchor)) anchor = well.v_star();
    if (!(anchor > v_lo && anchor < v_hi))
        throw std::invalid_argument("solve_profile: anchor must lie strictly between the wells");

    auto rhs = [&](double v) -> double {
        if (v <= v_lo || v >= v_hi) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(well.cofactor(v)) * std::pow(v_hi - v, well.m1()) *
               std::pow(v - v_lo, well.m2());
    };
    auto rk4_step = [&](double v, double h) -> double {
        const double k1 = rhs(v);
        const double k2 = rhs(v + 0.5 * h * k1);
        const double k3 = rhs(v + 0.5 * h * k2);
        const double k4 = rhs(v + h * k3);
        return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const long n_half = std::lround(half_width / dx);
    if (n_half < 4) throw std::invalid_argument("solve_profile: domain too short for the grid");
    const double progress_floor = 8.0 * std::numeric_limits<double>::epsilon() *
                                  std::max({1.0, std::abs(v_lo), std::abs(v_hi)});
    const double near_well = 1e-6 * span;

    WaveProfile p;
    p.family = family;
    p.s = opts.speed;
    p.anchor_value = anchor;
    p.dx = dx;

    std::vector<double> fwd{anchor};
    for (long i = 0; i < n_half; ++i) {
        const double cur = fwd.back();
        const double nxt = rk4_step(cur, dx);
        const double progress = nxt - cur;
        if (!std::isfinite(nxt) || nxt >= v_hi || progress <= progress_floor) {
            if (v_hi - cur < near_well) {
                p.truncated_right = true;
                break;
            }
            throw StepTooLarge("profile march lost monotonicity at dx = " + std::to_string(dx) +
                               "; refine the step");
        }
        fwd.push_back(nxt);
    }
    std::vector<double> bwd; // states at xi = -dx, -2 dx, ...
    {
        double cur = anchor;
        for (long i = 0; i < n_half; ++i) {
            const double nxt = rk4_step(cur, -dx);
            const double progress = cur - nxt;
            if (!std::isfinite(nxt) || nxt <= v_lo || progress <= progress_floor) {
                if (cur - v_lo < near_well) {
                    p.truncated_left = true;
                    break;
                }
                throw StepTooLarge("profile march lost monotonicity at dx = " +
                                   std::to_string(dx) + "; refine the step");
            }
            bwd.push_back(nxt);
            cur = nxt;
        }
    }

    const long n_left = static_cast<long>(bwd.size());
    const long n_right = static_cast<long>(fwd.size()) - 1;
    p.xi.resize(static_cast<size_t>(n_left + n_right + 1));
    p.v.resize(p.xi.size());
    for (long i = -n_left; i <= n_right; ++i) {
        const size_t k = static_cast<size_t>(i + n_left);
        p.xi[k] = static_cast<double>(i) * dx;
        p.v[k] = i < 0 ? bwd[static_cast<size_t>(-i - 1)] : fwd[static_cast<size_t>(i)];
    }

    // Derivative + certificate: widest stride whose first-integral residual
    // stays a factor below the 1e-8 contract and whose derivative is
    // strictly positive.
    const double target = 2.5e-9;
    const double hard_limit = 1e-8;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int s : {8, 4, 2, 1}) {
        std::vector<double> dv = detail::strided_derivative(p.v, dx, s);
        bool positive = true;
        double res = 0.0;
        const double f_plus = well.value(v_hi);
        for (size_t i = 0; i < dv.size(); ++i) {
            if (!(dv[i] > 0.0)) {
                positive = false;
                break;
            }
            res = std::max(res, std::abs(0.5 * dv[i] * dv[i] - (well.value(p.v[i]) - f_plus)));
        }
        if (!positive) continue;
        if (res <= target || (s == 1 && res <= hard_limit)) {
            p.dv = std::move(dv);
            p.stencil_stride = s;
            best_residual = res;
            break;
        }
        if (s == 1) best_residual = res;
    }
    if (p.dv.empty())
        throw StepTooLarge("profile derivative certificate failed (residual " +
                           std::to_string(best_residual) + "); refine dx");

    for (size_t i = 0; i + 1 < p.v.size(); ++i) {
        if (!(p.v[i + 1] > p.v[i]))
            throw StepTooLarge("profile is not strictly increasing; refine dx");
    }
    return p;
}

enum class TailSide { plus, minus };

inline std::string to_string(TailSide s) { return s == TailSide::plus ? "plus" : "minus"; }

struct DecayFit {
    TailSide side = TailSide::plus;
    bool exponential = true;      // m == 1 on this side
    double value = 0.0;           // fitted rate (exponential) or exponent (algebraic)
    double expected = 0.0;        // sqrt(f''(v+-)) or 1/(m-1)
    double r_squared = 0.0;
    size_t points = 0;
};

struct DecayFitOptions {
    double gap_lo = 1e-8; // fit window in |v - v_pm|
    double gap_hi = 1e-2;
    size_t min_nodes = 50;
};

namespace detail {

inline DecayFit fit_tail(const WaveProfile& p, const DoubleWell& well, TailSide side,
                         const DecayFitOptions& opt) {
    const bool plus = side == TailSide::plus;
    const double v_ref = plus ? well.v_plus() : well.v_minus();
    const int m = plus ? well.m1() : well.m2();

    std::vector<double> xs, ys;
    for (size_t i = 0; i < p.v.size(); ++i) {
        const double gap = std::abs(v_ref - p.v[i]);
        const bool tail_side = plus ? p.v[i] > well.v_star() : p.v[i] < well.v_star();
        if (!tail_side || gap < opt.gap_lo || gap > opt.gap_hi) continue;
        if (m == 1) {
            xs.push_back(p.xi[i]);
        } else {
            xs.push_back(std::log(1.0 + std::abs(p.xi[i])));
        }
        ys.push_back(std::log(gap));
    }
    if (xs.size() < opt.min_nodes)
        throw InsufficientTail("tail fit window holds " + std::to_string(xs.size()) +
                               " nodes on the " + to_string(side) + " side; need " +
                               std::to_string(opt.min_nodes));

    const LinearFit lf = fit_line(xs, ys);
    DecayFit fit;
    fit.side = side;
    fit.exponential = (m == 1);
    fit.value = std::abs(lf.slope);
    fit.expected = (m == 1) ? std::sqrt(well.derivative(v_ref, 2)) : 1.0 / (m - 1);
    fit.r_squared = lf.r_squared;
    fit.points = xs.size();
    return fit;
}

} // namespace detail

// Tail decay measurement on both sides: exponential rate (slope of log-gap
// versus xi) where the well tangency is simple, algebraic exponent (log-gap
// versus log(1+|xi|)) where it is flat.
inline std::pair<DecayFit, DecayFit> fit_decay_rates(const WaveProfile& p, const DoubleWell& well,
                                                     const DecayFitOptions& opt = {}) {
    return {detail::fit_tail(p, well, TailSide::plus, opt),
            detail::fit_tail(p, well, TailSide::minus, opt)};
}

} // namespace pfwave
