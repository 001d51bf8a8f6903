#pragma once

// Explicit method-of-lines steppers for the four 1D evolution equations:
//
//   modified_ac : v_t = (mu - f'(v) + v_xx) |v_x|
//   modified_ch : v_t = -{ (-f'(v) + v_xx)_x |v_x| }_x
//   classic_ac  : v_t = v_xx + mu - f'(v)
//   classic_ch  : v_t = -( v_xx - f'(v) )_xx
//
// Spatial operators are second-order central differences; the conserved
// models advance through face fluxes so the trapezoid mass telescopes
// exactly under reflecting boundaries. Field updates use compensated
// (Kahan) accumulation so conservation checks over millions of steps sit at
// roundoff rather than drifting.

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "pfwave/errors.hpp"
#include "pfwave/model.hpp"
#include "pfwave/potential.hpp"
#include "pfwave/profile.hpp"

namespace pfwave {

struct Model {
    ModelKind kind = ModelKind::modified_ac;
    double mu = 0.0;    // alpha*T11 + beta; the conserved equations have no mu term
    double delta = 0.0; // optional mobility smoothing |v_x| -> sqrt(v_x^2 + delta^2)

    static Model make(ModelKind kind, double mu, double delta = 0.0) {
        Model m;
        m.kind = kind;
        m.mu = is_conserved(kind) ? 0.0 : mu;
        m.delta = delta;
        return m;
    }
    bool conserved() const { return is_conserved(kind); }
    bool modified() const { return is_modified(kind); }
};

struct BoundaryCondition {
    enum class Tag { dirichlet, no_flux };
    Tag tag = Tag::dirichlet;
    double left = -1.0;
    double right = 1.0;

    static BoundaryCondition dirichlet(double left, double right) {
        return {Tag::dirichlet, left, right};
    }
    static BoundaryCondition no_flux() { return {Tag::no_flux, 0.0, 0.0}; }
};

inline std::string to_string(BoundaryCondition::Tag t) {
    return t == BoundaryCondition::Tag::dirichlet ? "dirichlet" : "no_flux";
}

class SimState {
public:
    // Uniform grid on [-L, L]; values.size() must match the node count
    // 2*round(L/dx)+1 and the grid needs at least 8 interior nodes.
    static SimState build(std::shared_ptr<const DoubleWell> well, Model model, double L,
                          double dx, std::vector<double> values, BoundaryCondition bc,
                          double dt = 0.0) {
        if (!(L > 0.0) || !(dx > 0.0)) throw std::invalid_argument("SimState: L, dx must be > 0");
        if (model.conserved() != (bc.tag == BoundaryCondition::Tag::no_flux))
            throw std::invalid_argument(
                "SimState: conserved models take no_flux boundaries, nonconserved take dirichlet");
        const long half = std::lround(L / dx);
        const size_t nodes = static_cast<size_t>(2 * half + 1);
        if (nodes < 10) throw std::invalid_argument("SimState: grid needs >= 8 interior nodes");
        if (values.size() != nodes)
            throw std::invalid_argument("SimState: value count does not match the grid");

        SimState s;
        s.well_ = std::move(well);
        s.model_ = model;
        s.bc_ = bc;
        s.dx_ = dx;
        s.L_ = L;
        s.x_.resize(nodes);
        for (long i = -half; i <= half; ++i)
            s.x_[static_cast<size_t>(i + half)] = static_cast<double>(i) * dx;
        s.v_ = std::move(values);
        s.comp_.assign(nodes, 0.0);
        s.set_dt(dt > 0.0 ? dt : 0.5 * s.stability_bound());
        return s;
    }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& v() const { return v_; }
    double dx() const { return dx_; }
    double domain_half_width() const { return L_; }
    double time() const { return t0_ + static_cast<double>(steps_) * dt_; }
    double dt() const { return dt_; }
    const Model& model() const { return model_; }
    const BoundaryCondition& bc() const { return bc_; }
    const DoubleWell& well() const { return *well_; }
    std::shared_ptr<const DoubleWell> well_ptr() const { return well_; }
    double overshoot() const { return overshoot_; }
    bool padded_init() const { return padded_init_; }
    void mark_padded_init() { padded_init_ = true; }

    void set_dt(double dt) {
        if (!(dt > 0.0)) throw std::invalid_argument("SimState: dt must be > 0");
        t0_ = time();
        steps_ = 0;
        dt_ = dt;
    }

    // Largest |v_x| over the faces, the gradient measure entering the
    // declared stability bounds.
    double max_face_gradient() const {
        double m = 0.0;
        for (size_t i = 0; i + 1 < v_.size(); ++i)
            m = std::max(m, std::abs(v_[i + 1] - v_[i]) / dx_);
        return m;
    }

    // Declared explicit-Euler stability bound of the scheme:
    //   dt <= 0.2 dx^2 / max(1, max|v_x|)   (second-order models)
    //   dt <= 0.05 dx^4 / max(1, max|v_x|)  (fourth-order models)
    // Constants are empirical and asserted by the dissipation tests.
    double stability_bound() const {
        const double g = std::max(1.0, std::hypot(max_face_gradient(), model_.delta));
        if (model_.conserved()) return 0.05 * dx_ * dx_ * dx_ * dx_ / g;
        return 0.2 * dx_ * dx_ / g;
    }

    // One explicit Euler step in place.
    void advance() {
        const size_t n = v_.size();
        rhs_.resize(n);
        const double bound = fill_rhs();
        if (dt_ > bound)
            throw Blowup("dt " + std::to_string(dt_) + " exceeds the declared stability bound " +
                             std::to_string(bound),
                         time(), -1);
        for (size_t i = 0; i < n; ++i) {
            const double y = dt_ * rhs_[i] - comp_[i];
            const double t = v_[i] + y;
            comp_[i] = (t - v_[i]) - y;
            v_[i] = t;
        }
        ++steps_;
        const double lo = well_->v_minus(), hi = well_->v_plus();
        for (size_t i = 0; i < n; ++i) {
            if (!std::isfinite(v_[i]))
                throw Blowup("non-finite field value", time(), static_cast<long>(i));
            overshoot_ = std::max({overshoot_, v_[i] - hi, lo - v_[i]});
        }
    }

private:
    // Semi-discrete right-hand side; returns the stability bound of the
    // current state so the caller can verify dt before committing.
    double fill_rhs() {
        const size_t n = v_.size();
        const double inv_dx = 1.0 / dx_;
        const double inv_dx2 = inv_dx * inv_dx;
        const double delta = model_.delta;
        double max_grad = 0.0;
        for (size_t i = 0; i + 1 < n; ++i)
            max_grad = std::max(max_grad, std::abs(v_[i + 1] - v_[i]) * inv_dx);

        auto mobility = [delta](double g) {
            return delta > 0.0 ? std::sqrt(g * g + delta * delta) : std::abs(g);
        };

        if (!model_.conserved()) {
            // Dirichlet: the end nodes are held at their initial (pure-phase)
            // values, so spatially constant fields stay constant bit for bit.
            rhs_[0] = 0.0;
            rhs_[n - 1] = 0.0;
            for (size_t i = 1; i + 1 < n; ++i) {
                const double vm = v_[i - 1];
                const double vp = v_[i + 1];
                const double lap = (vp - 2.0 * v_[i] + vm) * inv_dx2;
                const double base = model_.mu - well_->derivative(v_[i]) + lap;
                if (model_.kind == ModelKind::classic_ac) {
                    rhs_[i] = base;
                } else {
                    rhs_[i] = base * mobility((vp - vm) * 0.5 * inv_dx);
                }
            }
        } else {
            // chemical potential w = v_xx - f'(v) with mirrored ghosts
            w_.resize(n);
            for (size_t i = 0; i < n; ++i) {
                const double vm = i > 0 ? v_[i - 1] : v_[1];
                const double vp = i + 1 < n ? v_[i + 1] : v_[n - 2];
                w_[i] = (vp - 2.0 * v_[i] + vm) * inv_dx2 - well_->derivative(v_[i]);
            }
            flux_.resize(n - 1);
            for (size_t i = 0; i + 1 < n; ++i) {
                const double dw = (w_[i + 1] - w_[i]) * inv_dx;
                if (model_.kind == ModelKind::classic_ch) {
                    flux_[i] = dw;
                } else {
                    flux_[i] = dw * mobility((v_[i + 1] - v_[i]) * inv_dx);
                }
            }
            // interior divergence; walls see the mirrored (sign-flipped) flux
            rhs_[0] = -2.0 * flux_[0] * inv_dx;
            for (size_t i = 1; i + 1 < n; ++i) rhs_[i] = -(flux_[i] - flux_[i - 1]) * inv_dx;
            rhs_[n - 1] = 2.0 * flux_[n - 2] * inv_dx;
        }

        const double g = std::max(1.0, std::hypot(max_grad, delta));
        return model_.conserved() ? 0.05 * dx_ * dx_ * dx_ * dx_ / g : 0.2 * dx_ * dx_ / g;
    }

    std::shared_ptr<const DoubleWell> well_;
    Model model_;
    BoundaryCondition bc_;
    std::vector<double> x_, v_, comp_;
    std::vector<double> rhs_, w_, flux_; // scratch
    double dx_ = 0.0, L_ = 0.0;
    double t0_ = 0.0, dt_ = 0.0;
    long steps_ = 0;
    double overshoot_ = 0.0;
    bool padded_init_ = false;
};

// Pure-step convenience: returns the advanced copy.
inline SimState step(const SimState& s) {
    SimState next = s;
    next.advance();
    return next;
}

// Trapezoid mass integral.
inline double mass(const SimState& s) {
    const auto& v = s.v();
    double sum = 0.0;
    for (double val : v) sum += val;
    sum -= 0.5 * (v.front() + v.back());
    return sum * s.dx();
}

// Discrete free energy: face gradients plus trapezoid bulk term f(v) - mu v.
inline double energy(const SimState& s) {
    const auto& v = s.v();
    const double dx = s.dx();
    const double mu = s.model().mu;
    double grad = 0.0;
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        const double g = (v[i + 1] - v[i]) / dx;
        grad += 0.5 * g * g;
    }
    double bulk = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const double term = s.well().value(v[i]) - mu * v[i];
        bulk += (i == 0 || i + 1 == v.size()) ? 0.5 * term : term;
    }
    return (grad + bulk) * dx;
}

// Samples a wave profile onto the simulation grid by monotone cubic
// interpolation; grid nodes that coincide with profile nodes are copied
// exactly. Where the domain is wider than the profile, the tails are padded
// with the pure phases and the state is flagged.
inline SimState init_from_profile(const WaveProfile& profile,
                                  std::shared_ptr<const DoubleWell> well, double L, double dx,
                                  Model model, double dt = 0.0) {
    if (profile.v.size() < 2) throw std::invalid_argument("init_from_profile: empty profile");
    const long half = std::lround(L / dx);
    std::vector<double> values(static_cast<size_t>(2 * half + 1));
    const MonotoneCubic interp = profile.interpolant();
    const double xi0 = profile.xi.front();
    bool padded = false;
    for (long i = -half; i <= half; ++i) {
        const double x = static_cast<double>(i) * dx;
        double val;
        if (x < profile.xi_min()) {
            val = well->v_minus();
            padded = true;
        } else if (x > profile.xi_max()) {
            val = well->v_plus();
            padded = true;
        } else {
            const double jr = (x - xi0) / profile.dx;
            const long j = std::lround(jr);
            if (j >= 0 && j < static_cast<long>(profile.xi.size()) &&
                std::abs(jr - static_cast<double>(j)) < 1e-9) {
                val = profile.v[static_cast<size_t>(j)]; // exact subsample
            } else {
                val = interp(x);
            }
        }
        values[static_cast<size_t>(i + half)] = val;
    }
    const BoundaryCondition bc = model.conserved()
                                     ? BoundaryCondition::no_flux()
                                     : BoundaryCondition::dirichlet(well->v_minus(), well->v_plus());
    SimState s = SimState::build(std::move(well), model, L, dx, std::move(values), bc, dt);
    if (padded) s.mark_padded_init();
    return s;
}

struct Snapshot {
    double t = 0.0;
    std::vector<double> v;
};

struct Trajectory {
    std::vector<double> x;
    std::vector<Snapshot> snaps;
    Model model;
    double dx = 0.0;
    double dt = 0.0;
    double overshoot_max = 0.0;
    bool padded_init = false;
};

// Advances to t_end, recording snapshots every snapshot_every time units
// (plus the initial and final states). Deterministic for fixed inputs.
inline Trajectory run(SimState& state, double t_end, double snapshot_every) {
    if (!(t_end > state.time())) throw std::invalid_argument("run: t_end must exceed state time");
    if (!(snapshot_every > 0.0)) throw std::invalid_argument("run: snapshot cadence must be > 0");

    Trajectory traj;
    traj.x = state.x();
    traj.model = state.model();
    traj.dx = state.dx();
    traj.dt = state.dt();
    traj.padded_init = state.padded_init();

    const double dt = state.dt();
    const long n_steps = static_cast<long>(std::ceil((t_end - state.time()) / dt - 1e-9));
    const long stride = std::max(1L, std::lround(snapshot_every / dt));
    traj.snaps.push_back({state.time(), state.v()});
    for (long k = 1; k <= n_steps; ++k) {
        state.advance();
        if (k % stride == 0 || k == n_steps) traj.snaps.push_back({state.time(), state.v()});
    }
    traj.overshoot_max = state.overshoot();
    return traj;
}

} // namespace pfwave
