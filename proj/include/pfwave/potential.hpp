#pragma once

// Polynomial double-well potential with certified critical points, flatness
// orders at the wells, and the smooth cofactor of the factorized profile ODE.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pfwave/errors.hpp"
#include "pfwave/poly.hpp"

namespace pfwave {

namespace detail {

// Index of the first non-vanishing derivative at x (1-based), where
// "vanishing" means |f^(k)(x)| <= tol. Throws if every derivative vanishes.
inline int first_nonvanishing_derivative(const std::vector<Poly>& derivs, double x, double tol) {
    for (size_t k = 1; k < derivs.size(); ++k) {
        if (std::abs(derivs[k](x)) > tol) return static_cast<int>(k);
    }
    throw OrderDetectionFailure("all derivatives vanish; cannot detect flatness order");
}

} // namespace detail

struct WellDiagnostics {
    bool equal_wells = false;
    double gap = 0.0;   // f(v_plus) - f(v_minus)
    int m1 = 0;         // flatness order at v_plus
    int m2 = 0;         // flatness order at v_minus
    double g_min = 0.0; // min over [v_minus, v_plus] of the chord-corrected excess
    double g_argmin = 0.0;
    double mu = 0.0;    // echoed driving constant, for downstream reports
};

class DoubleWell {
public:
    // Certifies the double-well structure of the polynomial with the given
    // ascending coefficients: exactly three critical points v- < v* < v+,
    // min/max/min, f' > 0 on (v-, v*) and f' < 0 on (v*, v+), and
    // even-order tangencies at the wells.
    static DoubleWell from_coefficients(std::vector<double> coeffs) {
        DoubleWell w;
        Poly f{std::move(coeffs)};
        if (f.degree() < 4)
            throw std::invalid_argument("double-well potential needs polynomial degree >= 4");
        w.derivs_.push_back(f);
        for (int k = 0; k < f.degree(); ++k) w.derivs_.push_back(w.derivs_.back().derivative());

        const auto crit = real_roots(w.derivs_[1]);
        if (crit.size() != 3)
            throw NotDoubleWell("expected exactly 3 critical points, found " +
                                std::to_string(crit.size()));
        w.v_minus_ = crit[0];
        w.v_star_ = crit[1];
        w.v_plus_ = crit[2];

        const double tol = 1e-9 * std::max(1.0, std::abs(f.coefficients().back()));
        const int k_minus = detail::first_nonvanishing_derivative(w.derivs_, w.v_minus_, tol);
        const int k_star = detail::first_nonvanishing_derivative(w.derivs_, w.v_star_, tol);
        const int k_plus = detail::first_nonvanishing_derivative(w.derivs_, w.v_plus_, tol);
        if (k_minus % 2 != 0 || w.derivs_[static_cast<size_t>(k_minus)](w.v_minus_) <= 0.0)
            throw NotDoubleWell("leftmost critical point is not a local minimum");
        if (k_plus % 2 != 0 || w.derivs_[static_cast<size_t>(k_plus)](w.v_plus_) <= 0.0)
            throw NotDoubleWell("rightmost critical point is not a local minimum");
        if (k_star % 2 != 0 || w.derivs_[static_cast<size_t>(k_star)](w.v_star_) >= 0.0)
            throw NotDoubleWell("interior critical point is not a local maximum");
        w.m2_ = k_minus / 2;
        w.m1_ = k_plus / 2;

        // No further roots of f' exist between consecutive critical points,
        // so one sample per interval fixes the sign.
        if (w.derivative(0.5 * (w.v_minus_ + w.v_star_)) <= 0.0 ||
            w.derivative(0.5 * (w.v_star_ + w.v_plus_)) >= 0.0)
            throw NotDoubleWell("derivative sign pattern between critical points is wrong");

        w.gap_ = w.value(w.v_plus_) - w.value(w.v_minus_);
        if (std::abs(w.gap_) <= kEqualWellTol) w.build_cofactor();
        return w;
    }

    double value(double v) const { return derivs_[0](v); }

    // k-th derivative; zero beyond the polynomial degree.
    double derivative(double v, int k = 1) const {
        if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
        if (k >= static_cast<int>(derivs_.size())) return 0.0;
        return derivs_[static_cast<size_t>(k)](v);
    }

    const std::vector<double>& coefficients() const { return derivs_[0].coefficients(); }
    const Poly& poly() const { return derivs_[0]; }

    double v_minus() const { return v_minus_; }
    double v_star() const { return v_star_; }
    double v_plus() const { return v_plus_; }
    int m1() const { return m1_; }
    int m2() const { return m2_; }
    double span() const { return v_plus_ - v_minus_; }
    double well_gap() const { return gap_; }
    bool equal_wells() const { return std::abs(gap_) <= kEqualWellTol; }

    void require_equal_wells() const {
        if (!equal_wells())
            throw UnequalWells("well heights differ by " + std::to_string(gap_) +
                                   "; no wave connects the minima",
                               gap_);
    }

    // Smooth positive cofactor a(v) with
    //   f(v) - f(v+) = (1/2) a(v) (v+ - v)^{2 m1} (v - v_-)^{2 m2}.
    // Away from the wells this is the direct ratio; inside a small window
    // around each well it switches to the exact polynomial quotient, whose
    // value at the well endpoints is the analytic limit
    //   a(v+) = 2 f^(2m1)(v+) / ((2m1)! (v+ - v_-)^{2m2})   (and symmetrically).
    double cofactor(double v) const {
        require_equal_wells();
        if (v < v_minus_ || v > v_plus_)
            throw std::domain_error("cofactor is defined on [v_minus, v_plus]");
        const double window = 1e-4 * span();
        if (v_plus_ - v < window || v - v_minus_ < window) return 2.0 * cofactor_poly_(v);
        const double num = 2.0 * (value(v) - value(v_plus_));
        const double den = std::pow(v_plus_ - v, 2 * m1_) * std::pow(v - v_minus_, 2 * m2_);
        return num / den;
    }

    // Endpoint limit of the cofactor from the derivative formula.
    double cofactor_limit_plus() const {
        require_equal_wells();
        double fact = 1.0;
        for (int k = 2; k <= 2 * m1_; ++k) fact *= k;
        return 2.0 * derivative(v_plus_, 2 * m1_) / (fact * std::pow(span(), 2 * m2_));
    }
    double cofactor_limit_minus() const {
        require_equal_wells();
        double fact = 1.0;
        for (int k = 2; k <= 2 * m2_; ++k) fact *= k;
        return 2.0 * derivative(v_minus_, 2 * m2_) / (fact * std::pow(span(), 2 * m1_));
    }

    static constexpr double kEqualWellTol = 1e-10;

private:
    DoubleWell() = default;

    void build_cofactor() {
        // (f - f(v+)) divided exactly by (v - v+)^{2m1} (v - v_-)^{2m2};
        // the even powers make the sign of the (v+ - v) form immaterial.
        Poly divisor = Poly::constant(1.0);
        const Poly lin_plus{{-v_plus_, 1.0}};
        const Poly lin_minus{{-v_minus_, 1.0}};
        for (int k = 0; k < 2 * m1_; ++k) divisor = divisor * lin_plus;
        for (int k = 0; k < 2 * m2_; ++k) divisor = divisor * lin_minus;
        Poly num = derivs_[0] - Poly::constant(value(v_plus_));
        auto dm = poly_divmod(num, divisor);
        if (dm.remainder.max_abs_coeff() > 1e-8 * std::max(1.0, num.max_abs_coeff()))
            throw UnequalWells("tail factors do not divide the well excess", gap_);
        cofactor_poly_ = std::move(dm.quotient);
    }

    std::vector<Poly> derivs_; // derivs_[k] = f^(k)
    Poly cofactor_poly_;
    double v_minus_ = 0.0, v_star_ = 0.0, v_plus_ = 0.0;
    int m1_ = 0, m2_ = 0;
    double gap_ = 0.0;
};

// Well heights, flatness orders, and the minimum of the chord-corrected
// excess g(v) = f(v) - f(v-) - [(f(v+) - f(v-)) / (v+ - v-)] (v - v-) over
// [v-, v+]. A 1e4-point grid scan is refined by a local polish on g'.
inline WellDiagnostics diagnostics(const DoubleWell& w, double mu = 0.0) {
    WellDiagnostics d;
    d.gap = w.well_gap();
    d.equal_wells = w.equal_wells();
    d.m1 = w.m1();
    d.m2 = w.m2();
    d.mu = mu;

    const double a = w.v_minus(), b = w.v_plus();
    const double chord = d.gap / (b - a);
    auto g = [&](double v) { return w.value(v) - w.value(a) - chord * (v - a); };
    auto gp = [&](double v) { return w.derivative(v) - chord; };

    const int grid = 10000;
    double best_v = a, best_g = 0.0; // g(a) == 0 by construction
    for (int i = 0; i <= grid; ++i) {
        const double v = a + (b - a) * static_cast<double>(i) / grid;
        const double gv = g(v);
        if (gv < best_g) {
            best_g = gv;
            best_v = v;
        }
    }
    if (best_v > a && best_v < b) {
        // Newton polish of the interior stationary point, kept inside [a, b].
        double v = best_v;
        for (int it = 0; it < 40; ++it) {
            const double d1 = gp(v);
            const double d2 = w.derivative(v, 2);
            if (d2 == 0.0) break;
            double step = d1 / d2;
            if (!std::isfinite(step)) break;
            v = std::clamp(v - step, a, b);
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(v))) break;
        }
        if (g(v) < best_g) {
            best_g = g(v);
            best_v = v;
        }
    }
    const double g_b = g(b);
    if (g_b < best_g) {
        best_g = g_b;
        best_v = b;
    }
    d.g_min = best_g;
    d.g_argmin = best_v;
    return d;
}

// Named potentials used throughout the experiments.
namespace wells {

// f = (1/4) (v^2 - 1)^2: equal wells at +-1, simple tangency.
inline DoubleWell quartic() {
    return DoubleWell::from_coefficients({0.25, 0.0, -0.5, 0.0, 0.25});
}

// f = (v+1)^2 (v-1)^4: equal wells, order-2 tangency at +1.
inline DoubleWell sextic_m1_2() {
    return DoubleWell::from_coefficients({1.0, -2.0, -1.0, 4.0, -1.0, -2.0, 1.0});
}

// quartic + t*v: tilts the wells apart by about 2t.
inline DoubleWell tilted_quartic(double t) {
    return DoubleWell::from_coefficients({0.25, t, -0.5, 0.0, 0.25});
}

} // namespace wells

} // namespace pfwave
