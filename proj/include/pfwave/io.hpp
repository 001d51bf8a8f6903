#pragma once

// CSV and JSON emitters. All CSV floating-point values carry 17 significant
// digits so files reproduce bit-identically from a replayed manifest.

#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfwave/analysis.hpp"
#include "pfwave/elastic.hpp"
#include "pfwave/pde.hpp"
#include "pfwave/profile.hpp"

namespace pfwave {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {
inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // fixed newlines across platforms
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}
} // namespace detail

inline void write_profile_csv(const WaveProfile& p, const std::string& path) {
    auto out = detail::open_out(path);
    out << "xi,v,dv\n";
    for (size_t i = 0; i < p.xi.size(); ++i)
        out << fmt17(p.xi[i]) << ',' << fmt17(p.v[i]) << ',' << fmt17(p.dv[i]) << '\n';
}

inline void write_snapshots_csv(const Trajectory& traj, const std::string& path) {
    auto out = detail::open_out(path);
    out << "t,x,v\n";
    for (const auto& snap : traj.snaps)
        for (size_t i = 0; i < traj.x.size(); ++i)
            out << fmt17(snap.t) << ',' << fmt17(traj.x[i]) << ',' << fmt17(snap.v[i]) << '\n';
}

// Per-snapshot front position, mass, and energy. Snapshots without a single
// front crossing record nan.
inline void write_trajectory_csv(const Trajectory& traj, const SimState& reference_state,
                                 double level, const std::string& path) {
    auto out = detail::open_out(path);
    out << "t,front_position,mass,energy\n";
    for (const auto& snap : traj.snaps) {
        const SimState probe = SimState::build(
            reference_state.well_ptr(), reference_state.model(),
            reference_state.domain_half_width(), reference_state.dx(), snap.v,
            reference_state.bc(), reference_state.dt());
        double front = std::numeric_limits<double>::quiet_NaN();
        try {
            front = front_position(traj.x, snap.v, level);
        } catch (const NoCrossing&) {
        } catch (const MultipleCrossings&) {
        }
        out << fmt17(snap.t) << ',' << fmt17(front) << ',' << fmt17(mass(probe)) << ','
            << fmt17(energy(probe)) << '\n';
    }
}

inline void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    auto out = detail::open_out(path);
    out << "model,mu,front_exists,s_measured,s_predicted,tail_drift,l2_distance\n";
    for (const auto& r : rows)
        out << to_string(r.model) << ',' << fmt17(r.mu) << ','
            << (r.front_exists ? "true" : "false") << ',' << fmt17(r.s_measured) << ','
            << fmt17(r.s_predicted) << ',' << fmt17(r.tail_drift) << ','
            << fmt17(r.l2_distance) << '\n';
}

inline nlohmann::json decay_fit_json(const DecayFit& f) {
    return nlohmann::json{{"side", to_string(f.side)},
                          {"kind", f.exponential ? "exponential" : "algebraic"},
                          {"value", f.value},
                          {"expected", f.expected},
                          {"r_squared", f.r_squared}};
}

inline nlohmann::json speed_fit_json(const SpeedFit& f) {
    return nlohmann::json{{"s_measured", f.s_measured},     {"s_predicted", f.s_predicted},
                          {"relative_error", f.relative_error}, {"t_start", f.t_start},
                          {"t_end", f.t_end},               {"r_squared", f.r_squared}};
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace pfwave
