#pragma once

// Linear-elastic coupling data and its reduction to the scalar parameters of
// the 1D evolution equations.
//
// Index convention, used everywhere in this library: tensor component
// indices run 0..n-1 in storage, so the theory's "component 11" is
// storage (0,0) and D^{11}_{11} is d(0,0,0,0).

#include <cmath>
#include <string>
#include <vector>

#include "pfwave/errors.hpp"

namespace pfwave {

// Real symmetric n x n matrix, dense storage.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    static SymMatrix zero(int n) { return SymMatrix(n); }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    // diag(values[0], ..., values[n-1])
    static SymMatrix diagonal(const std::vector<double>& values) {
        SymMatrix m(static_cast<int>(values.size()));
        for (int i = 0; i < m.n_; ++i) m.set(i, i, values[static_cast<size_t>(i)]);
        return m;
    }

    // Row-major dense entries; symmetry is enforced (max asymmetry throws).
    static SymMatrix from_rows(int n, const std::vector<double>& rows, double tol = 1e-12) {
        if (static_cast<int>(rows.size()) != n * n)
            throw std::invalid_argument("SymMatrix::from_rows: wrong entry count");
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double a = rows[static_cast<size_t>(i * n + j)];
                const double b = rows[static_cast<size_t>(j * n + i)];
                if (std::abs(a - b) > tol)
                    throw std::invalid_argument("SymMatrix::from_rows: input is not symmetric");
            }
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = rows[static_cast<size_t>(i * n + j)];
                m.set(i, j, v);
            }
        return m;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    bool all_zero() const {
        for (double v : a_)
            if (v != 0.0) return false;
        return true;
    }

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

    int n_ = 0;
    std::vector<double> a_;
};

// Scalar product A:B = sum_ij A_ij B_ij.
inline double ddot(const SymMatrix& a, const SymMatrix& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
    return s;
}

// Rank-4 elasticity tensor D acting on symmetric matrices.
class ElasticityTensor {
public:
    ElasticityTensor() = default;
    explicit ElasticityTensor(int n) : n_(n), d_(static_cast<size_t>(n) * n * n * n, 0.0) {}

    // D sigma = 2*shear*sigma + bulk*tr(sigma)*I
    static ElasticityTensor isotropic(int n, double shear, double bulk) {
        ElasticityTensor t(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double v = 0.0;
                        if (i == k && j == l) v += shear;
                        if (i == l && j == k) v += shear;
                        if (i == j && k == l) v += bulk;
                        t.set(i, j, k, l, v);
                    }
        return t;
    }

    // D sigma = sigma (the symmetrized rank-4 identity).
    static ElasticityTensor identity_operator(int n) { return isotropic(n, 0.5, 0.0); }

    static ElasticityTensor from_dense(int n, const std::vector<double>& entries) {
        if (entries.size() != static_cast<size_t>(n) * n * n * n)
            throw std::invalid_argument("ElasticityTensor::from_dense: wrong entry count");
        ElasticityTensor t(n);
        t.d_ = entries;
        return t;
    }

    int dim() const { return n_; }

    double operator()(int i, int j, int k, int l) const { return d_[idx(i, j, k, l)]; }

    void set(int i, int j, int k, int l, double v) { d_[idx(i, j, k, l)] = v; }

    // The matrix D^{ij} = (D^{ij}_{kl})_{kl}.
    SymMatrix slice(int i, int j) const {
        SymMatrix m(n_);
        for (int k = 0; k < n_; ++k)
            for (int l = k; l < n_; ++l) m.set(k, l, (*this)(i, j, k, l));
        return m;
    }

    SymMatrix apply(const SymMatrix& s) const {
        SymMatrix out(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n_; ++k)
                    for (int l = 0; l < n_; ++l) acc += (*this)(i, j, k, l) * s(k, l);
                out.set(i, j, acc);
            }
        return out;
    }

private:
    size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }

    int n_ = 0;
    std::vector<double> d_;
};

struct ElasticSystem {
    ElasticityTensor D;
    SymMatrix eps0; // stress-free strain offset
    SymMatrix eps1; // stress-free strain slope in the order parameter
    int dim() const { return D.dim(); }
};

struct ValidationReport {
    bool valid = false;
    double minor_symmetry_residual = 0.0;
    double major_symmetry_residual = 0.0;
    double smallest_eigenvalue = 0.0; // of the induced operator on symmetric matrices
    double d1111 = 0.0;
    std::vector<std::string> failures;
};

// sigma, tau0, tau1 collapse the stress to T = sigma*T11 + tau0 + tau1*v;
// alpha, beta, gamma collapse the coupling to T:eps1 = alpha*T11 + beta + gamma*v.
struct ReducedCoefficients {
    SymMatrix sigma;
    SymMatrix tau0;
    SymMatrix tau1;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

namespace detail {

// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> m, int n) {
    auto at = [&](int i, int j) -> double& { return m[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = at(k, p), mkq = at(k, q);
                    at(k, p) = c * mkp - s * mkq;
                    at(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = at(p, k), mqk = at(q, k);
                    at(p, k) = c * mpk - s * mqk;
                    at(q, k) = s * mpk + c * mqk;
                }
            }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Orthonormal basis of symmetric n x n matrices: E_ii, and
// (E_ij + E_ji)/sqrt(2) for i < j.
inline std::vector<SymMatrix> symmetric_basis(int n) {
    std::vector<SymMatrix> basis;
    for (int i = 0; i < n; ++i) {
        SymMatrix e(n);
        e.set(i, i, 1.0);
        basis.push_back(e);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            SymMatrix e(n);
            e.set(i, j, inv_sqrt2);
            basis.push_back(e);
        }
    return basis;
}

} // namespace detail

// Checks the structural requirements on D (minor/major symmetry, positive
// definiteness of the induced operator) and the division guard D^{11}_{11} != 0.
// Report-style: never throws.
inline ValidationReport validate(const ElasticSystem& sys, double tol = 1e-12) {
    ValidationReport rep;
    const int n = sys.dim();
    const auto& D = sys.D;

    double minor_res = 0.0, major_res = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    minor_res = std::max(minor_res, std::abs(D(i, j, k, l) - D(j, i, k, l)));
                    minor_res = std::max(minor_res, std::abs(D(i, j, k, l) - D(i, j, l, k)));
                    major_res = std::max(major_res, std::abs(D(i, j, k, l) - D(k, l, i, j)));
                }
    rep.minor_symmetry_residual = minor_res;
    rep.major_symmetry_residual = major_res;

    // Induced operator on the space of symmetric matrices, in an orthonormal
    // basis; its smallest eigenvalue is the definiteness constant c.
    const auto basis = detail::symmetric_basis(n);
    const int m = static_cast<int>(basis.size());
    std::vector<double> op(static_cast<size_t>(m) * m, 0.0);
    for (int b = 0; b < m; ++b) {
        const SymMatrix img = D.apply(basis[static_cast<size_t>(b)]);
        for (int a = 0; a < m; ++a)
            op[static_cast<size_t>(a) * m + b] = ddot(img, basis[static_cast<size_t>(a)]);
    }
    const auto ev = detail::symmetric_eigenvalues(op, m);
    rep.smallest_eigenvalue = ev.front();
    rep.d1111 = D(0, 0, 0, 0);

    if (minor_res > tol) rep.failures.push_back("minor symmetry violated");
    if (major_res > tol) rep.failures.push_back("major symmetry violated");
    if (!(rep.smallest_eigenvalue > tol)) rep.failures.push_back("operator not positive definite");
    if (std::abs(rep.d1111) <= tol) rep.failures.push_back("division guard D1111 == 0");
    if (sys.eps0.dim() != n || sys.eps1.dim() != n) rep.failures.push_back("dimension mismatch");
    rep.valid = rep.failures.empty();
    return rep;
}

namespace detail {
inline void require_division_guard(const ElasticSystem& sys) {
    if (sys.D(0, 0, 0, 0) == 0.0)
        throw DivisionGuard("elastic reduction requires D^{11}_{11} != 0");
}
} // namespace detail

// First structural condition: residuals r_i whose vanishing makes the first
// column of tau1 zero, decoupling the stress first column from the order
// parameter.
inline std::vector<double> check_a1(const ElasticSystem& sys) {
    const int n = sys.dim();
    const double d1111 = sys.D(0, 0, 0, 0);
    const SymMatrix d11 = sys.D.slice(0, 0);
    const double d11_e1 = ddot(d11, sys.eps1);
    std::vector<double> r(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const SymMatrix di1 = sys.D.slice(i, 0);
        r[static_cast<size_t>(i)] = d1111 * ddot(di1, sys.eps1) - di1(0, 0) * d11_e1;
    }
    return r;
}

// Second structural condition: a scalar residual whose vanishing kills the
// order-parameter feedback gamma in T:eps1.
inline double check_a2(const ElasticSystem& sys) {
    const double d1111 = sys.D(0, 0, 0, 0);
    const SymMatrix d11 = sys.D.slice(0, 0);
    const double d11_e1 = ddot(d11, sys.eps1);
    const double de1_e1 = ddot(sys.D.apply(sys.eps1), sys.eps1);
    return d11_e1 * d11_e1 - d1111 * de1_e1;
}

// Collapses the n-dimensional coupling to sigma/tau matrices and the scalars
// alpha, beta, gamma.
inline ReducedCoefficients reduce(const ElasticSystem& sys) {
    detail::require_division_guard(sys);
    const int n = sys.dim();
    const double d1111 = sys.D(0, 0, 0, 0);
    const SymMatrix d11 = sys.D.slice(0, 0);
    const double d11_e0 = ddot(d11, sys.eps0);
    const double d11_e1 = ddot(d11, sys.eps1);

    ReducedCoefficients rc;
    rc.sigma = SymMatrix(n);
    rc.tau0 = SymMatrix(n);
    rc.tau1 = SymMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const SymMatrix dij = sys.D.slice(i, j);
            const double dij11 = dij(0, 0);
            rc.sigma.set(i, j, dij11 / d1111);
            rc.tau0.set(i, j, (dij11 * d11_e0 - d1111 * ddot(dij, sys.eps0)) / d1111);
            rc.tau1.set(i, j, (dij11 * d11_e1 - d1111 * ddot(dij, sys.eps1)) / d1111);
        }
    rc.alpha = d11_e1 / d1111;
    rc.beta = (d11_e1 * d11_e0 - d1111 * ddot(sys.D.apply(sys.eps0), sys.eps1)) / d1111;
    rc.gamma = (d11_e1 * d11_e1 - d1111 * ddot(sys.D.apply(sys.eps1), sys.eps1)) / d1111;
    return rc;
}

// Reduced stress T = sigma*t11 + tau0 + tau1*v. Component (0,0) equals t11
// exactly because sigma_11 == 1 and tau0_11 == tau1_11 == 0 by construction.
inline SymMatrix stress(const ReducedCoefficients& rc, double t11, double v) {
    const int n = rc.sigma.dim();
    SymMatrix t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            t.set(i, j, rc.sigma(i, j) * t11 + rc.tau0(i, j) + rc.tau1(i, j) * v);
    return t;
}

// Solves the (1,1) stress relation for the displacement gradient w = u^1_x1.
inline double displacement_gradient(const ElasticSystem& sys, double t11, double v) {
    detail::require_division_guard(sys);
    const SymMatrix d11 = sys.D.slice(0, 0);
    return (t11 + ddot(d11, sys.eps0) + ddot(d11, sys.eps1) * v) / sys.D(0, 0, 0, 0);
}

// Full stress from the displacement gradient: T_ij = D^{ij}_{11} w
// - D^{ij}:eps0 - (D^{ij}:eps1) v. Companion route to stress() used for
// round-trip checks.
inline SymMatrix stress_from_displacement_gradient(const ElasticSystem& sys, double w, double v) {
    const int n = sys.dim();
    SymMatrix t(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const SymMatrix dij = sys.D.slice(i, j);
            t.set(i, j, dij(0, 0) * w - ddot(dij, sys.eps0) - ddot(dij, sys.eps1) * v);
        }
    return t;
}

// Jump of the displacement gradient across a wave connecting v_minus to
// v_plus; equals the difference of displacement_gradient at the two states
// for any t11.
inline double displacement_gradient_jump(const ElasticSystem& sys, double v_minus, double v_plus) {
    detail::require_division_guard(sys);
    const SymMatrix d11 = sys.D.slice(0, 0);
    return ddot(d11, sys.eps1) * (v_plus - v_minus) / sys.D(0, 0, 0, 0);
}

} // namespace pfwave
