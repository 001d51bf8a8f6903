#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pfwave/elastic.hpp"

using namespace pfwave;

namespace {

// shear 1, bulk 1: D sigma = 2 sigma + tr(sigma) I
ElasticSystem isotropic_diag_system() {
    ElasticSystem sys;
    sys.D = ElasticityTensor::isotropic(2, 1.0, 1.0);
    sys.eps0 = SymMatrix::zero(2);
    sys.eps1 = SymMatrix::diagonal({1.0, 0.0});
    return sys;
}

ElasticSystem isotropic_identity_eps1() {
    ElasticSystem sys = isotropic_diag_system();
    sys.eps1 = SymMatrix::identity(2);
    return sys;
}

} // namespace

TEST_CASE("validate certifies the isotropic operator") {
    const auto rep = validate(isotropic_diag_system());
    CHECK(rep.valid);
    // eigenvalues of (sigma -> 2 sigma + tr(sigma) I) on 2x2 symmetric
    // matrices are {4, 2, 2}
    CHECK(rep.smallest_eigenvalue == Catch::Approx(2.0).margin(1e-12));
    CHECK(rep.d1111 == Catch::Approx(3.0));
}

TEST_CASE("validate on the identity operator") {
    ElasticSystem sys;
    sys.D = ElasticityTensor::identity_operator(3);
    sys.eps0 = SymMatrix::zero(3);
    sys.eps1 = SymMatrix::zero(3);
    const auto rep = validate(sys);
    CHECK(rep.valid);
    CHECK(rep.smallest_eigenvalue == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("validate rejects a vanishing division guard") {
    ElasticSystem sys = isotropic_diag_system();
    sys.D.set(0, 0, 0, 0, 0.0);
    const auto rep = validate(sys);
    CHECK_FALSE(rep.valid);
    bool guard = false;
    for (const auto& f : rep.failures)
        if (f.find("division guard") != std::string::npos) guard = true;
    CHECK(guard);
}

TEST_CASE("validate rejects broken symmetry") {
    ElasticSystem sys = isotropic_diag_system();
    sys.D.set(0, 1, 0, 0, sys.D(0, 1, 0, 0) + 1e-6); // breaks major symmetry only
    const auto rep = validate(sys);
    CHECK_FALSE(rep.valid);
    CHECK(rep.major_symmetry_residual > 1e-7);
}

TEST_CASE("first structural condition") {
    CHECK(check_a1(isotropic_diag_system()) == std::vector<double>{0.0, 0.0});
    CHECK(check_a1(isotropic_identity_eps1()) == std::vector<double>{0.0, 0.0});
    ElasticSystem zero = isotropic_diag_system();
    zero.eps1 = SymMatrix::zero(2);
    CHECK(check_a1(zero) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("second structural condition") {
    CHECK(check_a2(isotropic_diag_system()) == 0.0);
    CHECK(check_a2(isotropic_identity_eps1()) == Catch::Approx(-8.0)); // 16 - 3*8
    ElasticSystem zero = isotropic_diag_system();
    zero.eps1 = SymMatrix::zero(2);
    CHECK(check_a2(zero) == 0.0);
}

TEST_CASE("reduction scalars") {
    const auto rc = reduce(isotropic_diag_system());
    CHECK(rc.alpha == Catch::Approx(1.0));
    CHECK(rc.beta == 0.0);
    CHECK(rc.gamma == Catch::Approx(0.0).margin(1e-15));
    CHECK(rc.sigma(0, 0) == 1.0);
    CHECK(rc.tau0(0, 0) == 0.0);
    CHECK(rc.tau1(0, 0) == 0.0);

    const auto rc_id = reduce(isotropic_identity_eps1());
    CHECK(rc_id.gamma == Catch::Approx(-8.0 / 3.0));

    ElasticSystem trivial = isotropic_diag_system();
    trivial.eps1 = SymMatrix::zero(2);
    const auto rc0 = reduce(trivial);
    CHECK(rc0.alpha == 0.0);
    CHECK(rc0.beta == 0.0);
    CHECK(rc0.gamma == 0.0);
    CHECK(rc0.tau0.all_zero());
    CHECK(rc0.tau1.all_zero());
    CHECK(rc0.sigma(1, 1) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("reduce throws on the division guard") {
    ElasticSystem sys = isotropic_diag_system();
    sys.D.set(0, 0, 0, 0, 0.0);
    CHECK_THROWS_AS(reduce(sys), DivisionGuard);
}

TEST_CASE("reduced stress") {
    const auto sys = isotropic_diag_system();
    const auto rc = reduce(sys);

    SECTION("affine map at the origin returns tau0") {
        const SymMatrix t = stress(rc, 0.0, 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(t(i, j) == rc.tau0(i, j));
    }
    SECTION("component (1,1) equals t11 exactly and the coupling is mu") {
        const SymMatrix t = stress(rc, 0.3, 0.5);
        CHECK(t(0, 0) == 0.3);
        CHECK(ddot(t, sys.eps1) == Catch::Approx(rc.alpha * 0.3 + rc.beta + rc.gamma * 0.5)
                                       .margin(1e-14));
        CHECK(ddot(t, sys.eps1) == Catch::Approx(0.3).margin(1e-14));
    }
    SECTION("T11 is independent of v") {
        for (double v : {-3.0, 0.0, 1.7, 42.0}) CHECK(stress(rc, 0.3, v)(0, 0) == 0.3);
    }
}

TEST_CASE("displacement gradient and its jump") {
    const auto sys = isotropic_diag_system();

    SECTION("trivial zero case") {
        ElasticSystem bare = sys;
        bare.eps1 = SymMatrix::zero(2);
        CHECK(displacement_gradient(bare, 0.0, 7.0) == 0.0);
    }
    SECTION("direct value and resubstitution") {
        const double w = displacement_gradient(sys, 0.0, 1.0);
        CHECK(w == Catch::Approx(1.0)); // (0 + 0 + 3*1)/3
        // plugging w back into the (1,1) stress relation reproduces t11
        const SymMatrix d11 = sys.D.slice(0, 0);
        const double t11_back =
            sys.D(0, 0, 0, 0) * w - ddot(d11, sys.eps0) - ddot(d11, sys.eps1) * 1.0;
        CHECK(t11_back == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("jump matches the displacement-gradient difference") {
        CHECK(displacement_gradient_jump(sys, 1.0, 1.0) == 0.0);
        CHECK(displacement_gradient_jump(sys, -1.0, 1.0) == Catch::Approx(2.0));
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int k = 0; k < 200; ++k) {
            const double t11 = u(rng), va = u(rng), vb = u(rng);
            const double diff =
                displacement_gradient(sys, t11, vb) - displacement_gradient(sys, t11, va);
            const double jump = displacement_gradient_jump(sys, va, vb);
            CHECK(std::abs(jump - diff) <= 1e-13 * std::max(1.0, std::abs(jump)));
        }
        ElasticSystem bare = sys;
        bare.eps1 = SymMatrix::zero(2);
        CHECK(displacement_gradient_jump(bare, -5.0, 9.0) == 0.0);
    }
}

TEST_CASE("reduction identity over random states") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    SECTION("with both structural conditions: T:eps1 = alpha t11 + beta") {
        const auto sys = isotropic_diag_system();
        const auto rc = reduce(sys);
        for (int k = 0; k < 1000; ++k) {
            const double t11 = u(rng), v = u(rng);
            const double w = displacement_gradient(sys, t11, v);
            const SymMatrix t_full = stress_from_displacement_gradient(sys, w, v);
            CHECK(std::abs(ddot(t_full, sys.eps1) - (rc.alpha * t11 + rc.beta)) < 1e-12);
        }
    }
    SECTION("with the second condition violated: T:eps1 = alpha t11 + beta + gamma v") {
        const auto sys = isotropic_identity_eps1();
        const auto rc = reduce(sys);
        for (int k = 0; k < 1000; ++k) {
            const double t11 = u(rng), v = u(rng);
            const double w = displacement_gradient(sys, t11, v);
            const SymMatrix t_full = stress_from_displacement_gradient(sys, w, v);
            CHECK(std::abs(ddot(t_full, sys.eps1) - (rc.alpha * t11 + rc.beta + rc.gamma * v)) <
                  1e-12);
        }
    }
}

TEST_CASE("first-column identity under the first structural condition") {
    const auto rc = reduce(isotropic_diag_system());
    for (int i = 0; i < 2; ++i) CHECK(rc.tau1(i, 0) == 0.0); // exact
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double t11 = u(rng), v = u(rng);
        const SymMatrix t = stress(rc, t11, v);
        for (int i = 0; i < 2; ++i)
            CHECK(t(i, 0) == rc.sigma(i, 0) * t11 + rc.tau0(i, 0)); // exact: tau1 column is zero
    }
}

TEST_CASE("reduced and direct stress agree entrywise") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> mat(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + (trial % 2);
        ElasticSystem sys;
        sys.D = ElasticityTensor::isotropic(n, 0.3 + std::abs(u(rng)), 0.2 + std::abs(u(rng)));
        SymMatrix e0(n), e1(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                e0.set(i, j, mat(rng));
                e1.set(i, j, mat(rng));
            }
        sys.eps0 = e0;
        sys.eps1 = e1;
        const auto rc = reduce(sys);
        const double t11 = u(rng), v = u(rng);
        const double w = displacement_gradient(sys, t11, v);
        const SymMatrix a = stress(rc, t11, v);
        const SymMatrix b = stress_from_displacement_gradient(sys, w, v);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(std::abs(a(i, j) - b(i, j)) < 1e-12);
    }
}
