#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <random>

#include "pfwave/analysis.hpp"
#include "pfwave/pde.hpp"
#include "pfwave/profile.hpp"

using namespace pfwave;

namespace {

std::shared_ptr<const DoubleWell> quartic_ptr() {
    return std::make_shared<const DoubleWell>(wells::quartic());
}

SimState constant_state(ModelKind kind, double mu, double value, double L = 5.0,
                        double dx = 0.1) {
    auto well = quartic_ptr();
    const Model model = Model::make(kind, mu);
    const size_t n = static_cast<size_t>(2 * std::lround(L / dx) + 1);
    const BoundaryCondition bc = model.conserved()
                                     ? BoundaryCondition::no_flux()
                                     : BoundaryCondition::dirichlet(value, value);
    return SimState::build(well, model, L, dx, std::vector<double>(n, value), bc);
}

// Smooth random field compatible with the boundaries: a front-like base plus
// a windowed perturbation (vanishing at the walls for the nonconserved pair,
// flat-slope cosine modes for the conserved pair).
std::vector<double> random_smooth_field(const SimState& grid_reference, std::mt19937& rng,
                                        bool conserved) {
    const auto& x = grid_reference.x();
    const double L = grid_reference.domain_half_width();
    std::uniform_real_distribution<double> amp(-0.3, 0.3);
    std::vector<double> v(x.size());
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng), base = 0.3 + 0.1 * amp(rng);
    for (size_t i = 0; i < x.size(); ++i) {
        const double u = (x[i] + L) / (2.0 * L); // in [0, 1]
        double val = std::tanh(x[i] / std::sqrt(2.0)) + base;
        if (conserved) {
            val += a1 * std::cos(M_PI * u) + a2 * std::cos(2.0 * M_PI * u) +
                   a3 * std::cos(3.0 * M_PI * u);
        } else {
            const double window = std::sin(M_PI * u) * std::sin(M_PI * u);
            val += window * (a1 * std::sin(M_PI * u) + a2 * std::sin(2.0 * M_PI * u) +
                             a3 * std::sin(3.0 * M_PI * u));
        }
        v[i] = val;
    }
    return v;
}

} // namespace

TEST_CASE("init_from_profile samples and pads") {
    auto well = quartic_ptr();
    const WaveProfile profile = solve_profile(*well, 21.0, 0.01, WaveFamily::nonconserved);

    SECTION("wide profile covers the domain") {
        const SimState s = init_from_profile(profile, well, 20.0, 0.02,
                                             Model::make(ModelKind::modified_ac, 0.0));
        CHECK_FALSE(s.padded_init());
        const size_t mid = s.v().size() / 2;
        CHECK(s.v()[mid] == 0.0); // anchor node copied exactly
        CHECK(std::abs(s.v().front() - (-1.0)) < 1e-9);
        CHECK(std::abs(s.v().back() - 1.0) < 1e-9);
        CHECK(s.time() == 0.0);
        // aligned grids subsample exactly: sim node i*0.02 is profile node 2i*0.01
        const long prof_off = std::lround(-profile.xi_min() / profile.dx);
        const long sim_half = std::lround(20.0 / 0.02);
        for (size_t i = 0; i < s.v().size(); ++i) {
            const long j = prof_off + 2 * (static_cast<long>(i) - sim_half);
            REQUIRE(s.v()[i] == profile.v[static_cast<size_t>(j)]);
        }
    }
    SECTION("narrow profile pads with the pure phases") {
        const WaveProfile narrow = solve_profile(*well, 5.0, 0.01, WaveFamily::nonconserved);
        const SimState s = init_from_profile(narrow, well, 10.0, 0.1,
                                             Model::make(ModelKind::modified_ac, 0.2));
        CHECK(s.padded_init());
        CHECK(s.v().front() == -1.0);
        CHECK(s.v().back() == 1.0);
        CHECK(s.v()[1] == -1.0); // inside the padded zone
    }
    SECTION("empty profile is rejected") {
        WaveProfile empty;
        CHECK_THROWS_AS(
            init_from_profile(empty, well, 10.0, 0.1, Model::make(ModelKind::modified_ac, 0.0)),
            std::invalid_argument);
    }
}

TEST_CASE("constant states are exact fixed points of the degenerate models") {
    for (ModelKind kind : {ModelKind::modified_ac, ModelKind::modified_ch}) {
        for (double value : {-1.0, -0.23, 0.0, 0.37, 1.0}) {
            SimState s = constant_state(kind, 0.7, value);
            const std::vector<double> before = s.v();
            for (int k = 0; k < 5; ++k) s.advance();
            REQUIRE(s.v() == before); // bit-identical
        }
    }
}

TEST_CASE("classic nonconserved constants drift at mu") {
    SimState s = constant_state(ModelKind::classic_ac, 0.2, 1.0);
    const double dt = s.dt();
    s.advance();
    for (size_t i = 1; i + 1 < s.v().size(); ++i)
        REQUIRE(s.v()[i] == 1.0 + 0.2 * dt); // exact forward-Euler arithmetic (f'(1) = 0)
    CHECK(s.v().front() == 1.0); // held end nodes
    CHECK(s.v().back() == 1.0);
}

TEST_CASE("conserved models conserve the trapezoid mass to machine precision") {
    auto well = quartic_ptr();
    std::mt19937 rng(99);
    for (ModelKind kind : {ModelKind::modified_ch, ModelKind::classic_ch}) {
        const Model model = Model::make(kind, 0.0);
        SimState proto = constant_state(kind, 0.0, 0.0, 6.0, 0.12);
        SimState s = SimState::build(well, model, 6.0, 0.12,
                                     random_smooth_field(proto, rng, true),
                                     BoundaryCondition::no_flux());
        const double m0 = mass(s);
        REQUIRE(std::abs(m0) > 0.1); // the generator provides some net mass
        for (int k = 0; k < 100000; ++k) s.advance();
        CHECK(std::abs(mass(s) - m0) <= 1e-12 * std::abs(m0) + 1e-14);
    }
}

TEST_CASE("mass and energy reference values") {
    auto well = quartic_ptr();
    const Model model = Model::make(ModelKind::modified_ac, 0.0);

    SECTION("uniform field on [-20, 20]") {
        const size_t n = static_cast<size_t>(2 * std::lround(20.0 / 0.02) + 1);
        const SimState s = SimState::build(well, model, 20.0, 0.02, std::vector<double>(n, 1.0),
                                           BoundaryCondition::dirichlet(1.0, 1.0));
        CHECK(mass(s) == Catch::Approx(40.0).margin(1e-12));
        CHECK(energy(s) == 0.0); // f(1) = 0 and no gradient
    }
    SECTION("antisymmetric field integrates to zero") {
        const WaveProfile p = solve_profile(*well, 21.0, 0.01, WaveFamily::nonconserved);
        const SimState s = init_from_profile(p, well, 20.0, 0.02, model);
        CHECK(std::abs(mass(s)) < 1e-10);
    }
    SECTION("constant v* field") {
        const size_t n = static_cast<size_t>(2 * std::lround(10.0 / 0.1) + 1);
        const SimState s = SimState::build(well, model, 10.0, 0.1, std::vector<double>(n, 0.0),
                                           BoundaryCondition::dirichlet(0.0, 0.0));
        CHECK(energy(s) == Catch::Approx(0.25 * 20.0).margin(1e-12));
    }
    SECTION("profile energy against the quadrature oracle") {
        const WaveProfile p = solve_profile(*well, 21.0, 0.01, WaveFamily::nonconserved);
        const SimState s = init_from_profile(p, well, 20.0, 0.02, model);
        // oracle: fine trapezoid quadrature of (1/2) v'^2 + f(v) on the
        // analytic kink; the closed-form value is 2 sqrt(2)/3
        double oracle = 0.0;
        const double h = 1e-4;
        auto integrand = [](double z) {
            const double c = std::cosh(z / std::sqrt(2.0));
            const double vp = 1.0 / (std::sqrt(2.0) * c * c);
            const double v = std::tanh(z / std::sqrt(2.0));
            return 0.5 * vp * vp + 0.25 * (v * v - 1.0) * (v * v - 1.0);
        };
        for (double xi = -20.0; xi < 20.0; xi += h)
            oracle += 0.5 * h * (integrand(xi) + integrand(xi + h));
        CHECK(oracle == Catch::Approx(2.0 * std::sqrt(2.0) / 3.0).margin(1e-6));
        CHECK(energy(s) == Catch::Approx(oracle).margin(1e-3));
    }
}

TEST_CASE("discrete energy dissipation at half the stability bound") {
    std::mt19937 rng(2024);
    for (ModelKind kind :
         {ModelKind::modified_ac, ModelKind::classic_ac, ModelKind::modified_ch,
          ModelKind::classic_ch}) {
        const bool conserved = is_conserved(kind);
        const Model model = Model::make(kind, 0.15);
        auto well = quartic_ptr();
        for (int trial = 0; trial < 3; ++trial) {
            SimState proto = constant_state(kind, model.mu, 0.0, 5.0, 0.1);
            std::vector<double> init = random_smooth_field(proto, rng, conserved);
            const BoundaryCondition bc =
                conserved ? BoundaryCondition::no_flux()
                          : BoundaryCondition::dirichlet(init.front(), init.back());
            SimState s = SimState::build(well, model, 5.0, 0.1, std::move(init), bc);
            s.set_dt(0.5 * s.stability_bound());
            double e = energy(s);
            for (int k = 0; k < 300; ++k) {
                s.advance();
                const double e_next = energy(s);
                REQUIRE(e_next <= e + 1e-8);
                e = e_next;
            }
        }
    }
}

TEST_CASE("mobility smoothing removes the degeneracy") {
    // with delta > 0 a constant state off the held boundaries is no longer
    // an exact fixed point of the degenerate nonconserved model
    auto well = quartic_ptr();
    const size_t n = 101;
    SimState s = SimState::build(well, Model::make(ModelKind::modified_ac, 0.2, 0.1), 5.0, 0.1,
                                 std::vector<double>(n, 1.0),
                                 BoundaryCondition::dirichlet(1.0, 1.0));
    const double dt = s.dt();
    s.advance();
    for (size_t i = 1; i + 1 < s.v().size(); ++i)
        REQUIRE(s.v()[i] == 1.0 + 0.2 * 0.1 * dt); // rhs = mu * delta at flat fields

    // the conserved flux form stays exactly conservative with smoothing on
    std::mt19937 rng(5);
    SimState proto = constant_state(ModelKind::modified_ch, 0.0, 0.0, 6.0, 0.12);
    SimState c = SimState::build(well, Model::make(ModelKind::modified_ch, 0.0, 0.05), 6.0, 0.12,
                                 random_smooth_field(proto, rng, true),
                                 BoundaryCondition::no_flux());
    const double m0 = mass(c);
    for (int k = 0; k < 20000; ++k) c.advance();
    CHECK(std::abs(mass(c) - m0) <= 1e-12 * std::abs(m0) + 1e-14);
}

TEST_CASE("state construction validates its invariants") {
    auto well = quartic_ptr();
    // fewer than 8 interior nodes
    CHECK_THROWS_AS(SimState::build(well, Model::make(ModelKind::modified_ac, 0.0), 0.3, 0.1,
                                    std::vector<double>(7, 0.0),
                                    BoundaryCondition::dirichlet(-1.0, 1.0)),
                    std::invalid_argument);
    // boundary kind must match the model family
    CHECK_THROWS_AS(SimState::build(well, Model::make(ModelKind::modified_ch, 0.0), 5.0, 0.1,
                                    std::vector<double>(101, 0.0),
                                    BoundaryCondition::dirichlet(-1.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(SimState::build(well, Model::make(ModelKind::classic_ac, 0.0), 5.0, 0.1,
                                    std::vector<double>(101, 0.0), BoundaryCondition::no_flux()),
                    std::invalid_argument);
    // value count must match the grid
    CHECK_THROWS_AS(SimState::build(well, Model::make(ModelKind::classic_ac, 0.0), 5.0, 0.1,
                                    std::vector<double>(100, 0.0),
                                    BoundaryCondition::dirichlet(-1.0, 1.0)),
                    std::invalid_argument);
    // conserved models carry no mu term
    CHECK(Model::make(ModelKind::modified_ch, 0.7).mu == 0.0);
    CHECK(Model::make(ModelKind::classic_ch, -0.3).mu == 0.0);
}

TEST_CASE("declared stability bound is enforced") {
    SimState s = constant_state(ModelKind::classic_ac, 0.0, 0.37);
    s.set_dt(10.0 * s.stability_bound());
    CHECK_THROWS_AS(s.advance(), Blowup);
}

TEST_CASE("non-finite values are reported as blowup") {
    auto well = quartic_ptr();
    const size_t n = 101;
    std::vector<double> v(n, 0.0);
    v[50] = 1e160; // f' overflows on the first step
    SimState s = SimState::build(well, Model::make(ModelKind::classic_ac, 0.0), 5.0, 0.1,
                                 std::move(v), BoundaryCondition::dirichlet(0.0, 0.0));
    CHECK_THROWS_AS(s.advance(), Blowup);
}

TEST_CASE("run records snapshots and the overshoot") {
    auto well = quartic_ptr();
    const WaveProfile p = solve_profile(*well, 6.0, 2e-3, WaveFamily::nonconserved);
    SimState s = init_from_profile(p, well, 8.0, 0.1, Model::make(ModelKind::modified_ac, 0.2));
    const Trajectory traj = run(s, 0.5, 0.1);
    CHECK(traj.snaps.size() == 6);
    CHECK(traj.snaps.front().t == 0.0);
    CHECK(traj.snaps.back().t >= 0.5);
    CHECK(traj.overshoot_max < 1e-3); // recorded metric: small but nonzero at dx = 0.1
    CHECK(traj.padded_init);
}

TEST_CASE("traveling-frame residual of the degenerate nonconserved operator") {
    // substituting the exact profile and s = -mu into the semi-discrete
    // operator leaves a residual that shrinks at second order in dx
    auto well = quartic_ptr();
    const double mu = 0.2;
    const WaveProfile p = solve_profile(*well, 8.0, 1e-3, WaveFamily::nonconserved);
    const MonotoneCubic interp = p.interpolant();
    auto residual_at = [&](double dx) {
        const long half = std::lround(6.0 / dx);
        double res = 0.0;
        for (long i = -half + 1; i < half; ++i) {
            const double x = static_cast<double>(i) * dx;
            const double vm = interp(x - dx), v0 = interp(x), vp = interp(x + dx);
            const double lap = (vp - 2.0 * v0 + vm) / (dx * dx);
            const double grad = (vp - vm) / (2.0 * dx);
            const double rhs = (mu - (v0 * v0 * v0 - v0) + lap) * std::abs(grad);
            const double lhs = mu * grad; // v_t = -s v_xi with s = -mu
            res = std::max(res, std::abs(rhs - lhs));
        }
        return res;
    };
    const double r1 = residual_at(0.04);
    const double r2 = residual_at(0.02);
    INFO("residual " << r1 << " -> " << r2);
    CHECK(r2 < r1 / 3.0);
}

TEST_CASE("modified and classic nonconserved models share the stationary front") {
    auto well = quartic_ptr();
    const WaveProfile p = solve_profile(*well, 7.0, 2e-3, WaveFamily::nonconserved);
    SimState a = init_from_profile(p, well, 10.0, 0.05, Model::make(ModelKind::modified_ac, 0.0));
    SimState b = init_from_profile(p, well, 10.0, 0.05, Model::make(ModelKind::classic_ac, 0.0));
    run(a, 2.0, 0.5);
    run(b, 2.0, 0.5);
    const DistanceResult d = state_distance(a, b);
    CHECK(d.linf <= 1e-3);
    CHECK(std::abs(d.shift) <= 0.05);
}
