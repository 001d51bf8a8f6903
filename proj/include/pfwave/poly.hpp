#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pfwave {

// Dense univariate polynomial with real coefficients stored in ascending
// degree order. Degrees stay small (desk scale), so everything is plain
// O(n^2) coefficient arithmetic.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(double a) { return Poly({a}); }

    const std::vector<double>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero poly

    double operator()(double x) const {
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double a : c_) m = std::max(m, std::abs(a));
        return m;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<double> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
        return Poly(std::move(d));
    }

    Poly operator+(const Poly& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(std::move(r));
    }

    Poly operator-(const Poly& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
        return Poly(std::move(r));
    }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }

    Poly scaled(double s) const {
        std::vector<double> r(c_);
        for (double& a : r) a *= s;
        return Poly(std::move(r));
    }

    // Drop leading coefficients that are negligible relative to the largest
    // coefficient. Keeps degree honest after subtractions.
    void trim(double rel_tol = 1e-13) {
        const double m = max_abs_coeff();
        const double tol = rel_tol * std::max(1.0, m);
        while (!c_.empty() && std::abs(c_.back()) <= tol) c_.pop_back();
        if (m == 0.0) c_.clear();
    }

private:
    std::vector<double> c_;
};

struct PolyDivMod {
    Poly quotient;
    Poly remainder;
};

// Euclidean division: num = quotient * den + remainder, deg r < deg den.
inline PolyDivMod poly_divmod(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::invalid_argument("poly_divmod: division by zero polynomial");
    std::vector<double> rem(num.coefficients());
    const int dn = den.degree();
    const double lead = den.coefficients().back();
    if (static_cast<int>(rem.size()) - 1 < dn) return {Poly(), Poly(std::move(rem))};
    std::vector<double> q(rem.size() - static_cast<size_t>(dn), 0.0);
    for (int k = static_cast<int>(rem.size()) - 1; k >= dn; --k) {
        const double f = rem[static_cast<size_t>(k)] / lead;
        q[static_cast<size_t>(k - dn)] = f;
        for (int j = 0; j <= dn; ++j)
            rem[static_cast<size_t>(k - dn + j)] -= f * den.coefficients()[static_cast<size_t>(j)];
        rem[static_cast<size_t>(k)] = 0.0; // kill rounding residue of the eliminated term
    }
    return {Poly(std::move(q)), Poly(std::move(rem))};
}

namespace detail {

// Approximate gcd by the Euclidean algorithm with per-step normalization and
// coefficient trimming. Adequate for the desk-scale polynomials handled here;
// near-multiple roots collapse onto the tolerance scale.
inline Poly fuzzy_gcd(Poly a, Poly b, double rel_tol = 1e-10) {
    auto normalize = [](Poly& p) {
        const double m = p.max_abs_coeff();
        if (m > 0.0) p = p.scaled(1.0 / m);
    };
    normalize(a);
    normalize(b);
    if (b.degree() > a.degree()) std::swap(a, b);
    while (!b.is_zero() && b.degree() >= 0) {
        Poly r = poly_divmod(a, b).remainder;
        r.trim(rel_tol);
        a = std::move(b);
        b = std::move(r);
        normalize(b);
    }
    return a;
}

// Sturm chain of a (preferably squarefree) polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero() && chain.back().degree() >= 1) {
        Poly r = poly_divmod(chain[chain.size() - 2], chain.back()).remainder.scaled(-1.0);
        r.trim(1e-12);
        const double m = r.max_abs_coeff();
        if (m > 0.0) r = r.scaled(1.0 / m);
        if (r.is_zero()) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_changes_at(const std::vector<Poly>& chain, double x) {
    int changes = 0;
    int prev = 0;
    for (const Poly& p : chain) {
        const double y = p(x);
        const int s = (y > 0.0) - (y < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

} // namespace detail

// All distinct real roots of p, ascending, polished to near machine
// precision. Multiplicities are collapsed through the squarefree part
// p / gcd(p, p'), then isolated with the Sturm chain and refined by
// bisection plus a guarded Newton polish.
inline std::vector<double> real_roots(const Poly& p) {
    if (p.degree() <= 0) return {};
    if (p.degree() == 1) {
        const auto& c = p.coefficients();
        return {-c[0] / c[1]};
    }

    Poly sf = p;
    {
        Poly g = detail::fuzzy_gcd(p, p.derivative());
        if (g.degree() >= 1) {
            sf = poly_divmod(p, g).quotient;
            sf.trim(1e-12);
        }
    }
    if (sf.degree() < 1) sf = p; // fallback: gcd collapsed too much

    const auto chain = detail::sturm_chain(sf);
    const auto& c = sf.coefficients();
    double bound = 0.0;
    for (size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, std::abs(c[i] / c.back()));
    bound += 1.0;

    // Nudge an endpoint off a root of the squarefree part.
    auto clear_point = [&](double x, double dir) {
        double step = 1e-14 * std::max(1.0, std::abs(x));
        while (sf(x) == 0.0) {
            x += dir * step;
            step *= 2.0;
        }
        return x;
    };

    std::vector<std::pair<double, double>> brackets;
    std::vector<double> roots;

    struct Seg {
        double a, b;
        int count;
    };
    std::vector<Seg> stack;
    {
        const double a = clear_point(-bound, -1.0);
        const double b = clear_point(bound, 1.0);
        const int n = detail::sign_changes_at(chain, a) - detail::sign_changes_at(chain, b);
        if (n > 0) stack.push_back({a, b, n});
    }
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 1) {
            brackets.emplace_back(s.a, s.b);
            continue;
        }
        double mid = 0.5 * (s.a + s.b);
        if (sf(mid) == 0.0) {
            roots.push_back(mid);
            const double eps = 1e-13 * std::max(1.0, std::abs(mid));
            const double ml = clear_point(mid - eps, -1.0);
            const double mr = clear_point(mid + eps, 1.0);
            const int nl = detail::sign_changes_at(chain, s.a) - detail::sign_changes_at(chain, ml);
            const int nr = detail::sign_changes_at(chain, mr) - detail::sign_changes_at(chain, s.b);
            if (nl > 0) stack.push_back({s.a, ml, nl});
            if (nr > 0) stack.push_back({mr, s.b, nr});
            continue;
        }
        const int nl = detail::sign_changes_at(chain, s.a) - detail::sign_changes_at(chain, mid);
        const int nr = s.count - nl;
        if (nl > 0) stack.push_back({s.a, mid, nl});
        if (nr > 0) stack.push_back({mid, s.b, nr});
    }

    for (auto [a, b] : brackets) {
        double fa = sf(a);
        // Bisection on the squarefree part; the isolating interval holds a
        // single simple root, so a sign change is guaranteed.
        for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = sf(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fa < 0.0) == (fm < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        double x = 0.5 * (a + b);
        const Poly dsf = sf.derivative();
        for (int it = 0; it < 4; ++it) {
            const double d = dsf(x);
            if (d == 0.0) break;
            const double step = sf(x) / d;
            if (!std::isfinite(step) || std::abs(step) > (b - a) + 1e-9) break;
            x -= step;
        }
        roots.push_back(x);
    }

    std::sort(roots.begin(), roots.end());
    // Collapse ties that survived the squarefree pass.
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || r - out.back() > 1e-9 * std::max(1.0, std::abs(r))) out.push_back(r);
    }
    return out;
}

} // namespace pfwave
