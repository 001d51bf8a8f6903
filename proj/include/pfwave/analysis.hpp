#pragma once

// Post-processing: front tracking, speed fits against the predicted wave
// velocity, translation-modded profile distances, tail drift, and the
// model-comparison experiment matrix.

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "pfwave/errors.hpp"
#include "pfwave/fitting.hpp"
#include "pfwave/interp.hpp"
#include "pfwave/pde.hpp"
#include "pfwave/profile.hpp"

namespace pfwave {

// Abscissa where the field crosses the level, by linear interpolation.
// The field must cross exactly once (monotone front).
inline double front_position(const std::vector<double>& x, const std::vector<double>& v,
                             double level) {
    std::vector<double> crossings;
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = v[i] - level, b = v[i + 1] - level;
        if (a == 0.0) crossings.push_back(x[i]);
        if (a * b < 0.0)
            crossings.push_back(x[i] + (x[i + 1] - x[i]) * (level - v[i]) / (v[i + 1] - v[i]));
    }
    if (v.back() == level) crossings.push_back(x.back());
    if (crossings.empty()) throw NoCrossing("field does not cross the front level");
    if (crossings.size() > 1)
        throw MultipleCrossings("field crosses the front level " +
                                std::to_string(crossings.size()) + " times");
    return crossings.front();
}

inline double front_position(const SimState& s, double level) {
    return front_position(s.x(), s.v(), level);
}

struct SpeedFit {
    double s_measured = 0.0;
    double s_predicted = 0.0;
    double relative_error = 0.0; // |measured| when the prediction is zero
    double t_start = 0.0;
    double t_end = 0.0;
    double r_squared = 1.0;
};

// Least-squares slope of the front position over the second half of the
// trajectory (the first half is treated as transient).
inline SpeedFit measure_speed(const Trajectory& traj, double level, double predicted) {
    const double t_lo = traj.snaps.front().t;
    const double t_hi = traj.snaps.back().t;
    const double t_mid = 0.5 * (t_lo + t_hi);
    std::vector<double> ts, fronts;
    for (const auto& snap : traj.snaps) {
        if (snap.t < t_mid - 1e-12) continue;
        ts.push_back(snap.t);
        fronts.push_back(front_position(traj.x, snap.v, level));
    }
    if (ts.size() < 10)
        throw std::invalid_argument("measure_speed: fit window holds " +
                                    std::to_string(ts.size()) + " snapshots; need >= 10");
    const LinearFit lf = fit_line(ts, fronts);
    SpeedFit fit;
    fit.s_measured = lf.slope;
    fit.s_predicted = predicted;
    fit.r_squared = lf.r_squared;
    fit.t_start = ts.front();
    fit.t_end = ts.back();
    if (predicted != 0.0 && std::isfinite(predicted))
        fit.relative_error = std::abs(lf.slope - predicted) / std::abs(predicted);
    else if (predicted == 0.0)
        fit.relative_error = std::abs(lf.slope);
    else
        fit.relative_error = std::numeric_limits<double>::quiet_NaN();
    return fit;
}

struct DistanceResult {
    double shift = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

namespace detail {

// L2/Linf distance between sampled data and a reference curve translated by
// the shift that minimizes the L2 norm: golden-section search to 1e-6,
// then a parabolic polish (the squared norm is locally quadratic in the
// shift, so a sampled-from-the-same-curve state comes back at roundoff).
// The reference clamps to its end values outside its support.
inline DistanceResult aligned_distance(const std::vector<double>& x, const std::vector<double>& v,
                                       const MonotoneCubic& ref, double dx, double shift_bound,
                                       double tol = 1e-6) {
    auto sq_at = [&](double h) {
        double acc = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double r = v[i] - ref(x[i] - h);
            acc += r * r;
        }
        return acc * dx;
    };
    double h = golden_section_min(sq_at, -shift_bound, shift_bound, tol);
    double step = tol;
    for (int it = 0; it < 40 && step > 1e-14; ++it) {
        const double f0 = sq_at(h - step), f1 = sq_at(h), f2 = sq_at(h + step);
        const double denom = f0 - 2.0 * f1 + f2;
        if (denom > 0.0) {
            const double move = 0.5 * step * (f0 - f2) / denom;
            if (std::abs(move) < step && sq_at(h + move) <= f1) h += move;
        }
        step *= 0.25;
    }
    DistanceResult out;
    out.shift = h;
    out.l2 = std::sqrt(sq_at(h));
    for (size_t i = 0; i < x.size(); ++i)
        out.linf = std::max(out.linf, std::abs(v[i] - ref(x[i] - h)));
    return out;
}

} // namespace detail

// Distance between a simulation state and a wave profile, modded by
// translation (waves are unique only up to a shift).
inline DistanceResult profile_distance(const SimState& s, const WaveProfile& profile) {
    return detail::aligned_distance(s.x(), s.v(), profile.interpolant(), s.dx(),
                                    0.5 * s.domain_half_width());
}

// Shape distance between two states on the same grid, modded by translation.
inline DistanceResult state_distance(const SimState& a, const SimState& b) {
    return detail::aligned_distance(a.x(), a.v(), MonotoneCubic::fit(b.x(), b.v()), a.dx(),
                                    0.5 * a.domain_half_width());
}

// Initial time-derivative estimate of the field deep in the requested tail,
// from the first two snapshots. The probe sits one length unit inside the
// boundary: the end nodes are pinned, so a probe directly against the wall
// would read the wall's relaxation layer instead of the free tail. Flat
// tails are exact fixed points of the degenerate models, so this is
// identically zero there; for the classic nonconserved model it starts at mu.
inline double tail_drift_rate(const Trajectory& traj, TailSide side) {
    if (traj.snaps.size() < 2)
        throw std::invalid_argument("tail_drift_rate: need at least two snapshots");
    const auto& s0 = traj.snaps[0];
    const auto& s1 = traj.snaps[1];
    const long n = static_cast<long>(s0.v.size());
    const long standoff = std::clamp(std::lround(1.0 / traj.dx), 1L, (n - 1) / 4);
    const size_t idx = static_cast<size_t>(side == TailSide::minus ? standoff
                                                                   : n - 1 - standoff);
    return (s1.v[idx] - s0.v[idx]) / (s1.t - s0.t);
}

struct ComparisonRow {
    ModelKind model = ModelKind::modified_ac;
    double mu = 0.0; // requested value; conserved equations ignore it
    bool front_exists = false;
    double s_measured = std::numeric_limits<double>::quiet_NaN();
    double s_predicted = std::numeric_limits<double>::quiet_NaN();
    double tail_drift = 0.0;
    double l2_distance = 0.0;
    double linf_distance = 0.0;
};

struct CompareConfig {
    DoubleWell well = wells::quartic();
    std::vector<double> mus{0.0, 0.2};
    // nonconserved cells
    double ac_L = 20.0, ac_dx = 0.02, ac_t_end = 20.0, ac_snapshot = 0.5;
    // conserved cells (fourth-order stability makes fine grids expensive)
    double ch_L = 10.0, ch_dx = 0.1, ch_t_end = 5.0, ch_snapshot = 0.25;
    double pad_margin = 5.0;   // profile half-width = L - pad_margin (exactly flat tails)
    double profile_dx = 2e-3;
    double delta = 0.0;
    int jobs = 1;
};

// Predicted front speed for a cell: -mu for the degenerate nonconserved
// model, 0 for the conserved pair, and 0 for the classic nonconserved model
// only when mu vanishes (otherwise no admissible wave exists: NaN).
inline double predicted_speed(ModelKind kind, double mu) {
    switch (kind) {
        case ModelKind::modified_ac: return -mu;
        case ModelKind::modified_ch:
        case ModelKind::classic_ch: return 0.0;
        case ModelKind::classic_ac:
            return mu == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

inline ComparisonRow run_cell(const CompareConfig& cfg, ModelKind kind, double mu) {
    ComparisonRow row;
    row.model = kind;
    row.mu = mu;
    row.s_predicted = predicted_speed(kind, mu);

    const bool conserved = is_conserved(kind);
    const double L = conserved ? cfg.ch_L : cfg.ac_L;
    const double dx = conserved ? cfg.ch_dx : cfg.ac_dx;
    const double t_end = conserved ? cfg.ch_t_end : cfg.ac_t_end;
    const double cadence = conserved ? cfg.ch_snapshot : cfg.ac_snapshot;

    auto well = std::make_shared<const DoubleWell>(cfg.well);
    // Nonconserved cells pad the tails with the pure phases (the degenerate
    // drift contrast needs exactly flat tails); conserved cells instead let
    // the profile cover the whole domain, since a pad junction would shed a
    // slow relaxation ripple under the fourth-order models.
    const double half_width = conserved ? L : L - cfg.pad_margin;
    const WaveProfile profile = solve_profile(*well, half_width, cfg.profile_dx, family_of(kind));
    SimState state =
        init_from_profile(profile, well, L, dx, Model::make(kind, mu, cfg.delta));
    const Trajectory traj = run(state, t_end, cadence);

    const SpeedFit fit = measure_speed(traj, well->v_star(), row.s_predicted);
    row.s_measured = fit.s_measured;
    const double drift_minus = tail_drift_rate(traj, TailSide::minus);
    const double drift_plus = tail_drift_rate(traj, TailSide::plus);
    row.tail_drift = std::abs(drift_minus) >= std::abs(drift_plus) ? drift_minus : drift_plus;
    const DistanceResult dist = profile_distance(state, profile);
    row.l2_distance = dist.l2;
    row.linf_distance = dist.linf;

    // Finite-run surrogate for "a traveling front exists": the measured
    // speed matches the prediction to 5%, the final shape stays within
    // 10 dx^2 of the translated initial profile, and the tails do not move.
    // "Do not move" allows 1e-3: fourth-order relaxation ripples sit around
    // 1e-5 at desk resolutions, while genuine tail motion is of order mu.
    row.front_exists = std::isfinite(fit.relative_error) && fit.relative_error <= 0.05 &&
                       dist.linf <= 10.0 * dx * dx && std::abs(row.tail_drift) <= 1e-3;
    return row;
}

} // namespace detail

// Runs the full (model x mu) experiment matrix. Cells are independent and
// may fan out over a small thread pool; row order is fixed regardless.
inline std::vector<ComparisonRow> run_comparison_matrix(const CompareConfig& cfg) {
    const ModelKind kinds[] = {ModelKind::modified_ac, ModelKind::classic_ac,
                               ModelKind::modified_ch, ModelKind::classic_ch};
    struct Cell {
        ModelKind kind;
        double mu;
    };
    std::vector<Cell> cells;
    for (ModelKind k : kinds)
        for (double mu : cfg.mus) cells.push_back({k, mu});

    std::vector<ComparisonRow> rows(cells.size());
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < cells.size(); ++i)
            rows[i] = detail::run_cell(cfg, cells[i].kind, cells[i].mu);
        return rows;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                rows[i] = detail::run_cell(cfg, cells[i].kind, cells[i].mu);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min<int>(jobs, static_cast<int>(cells.size())); ++j)
        pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

} // namespace pfwave
