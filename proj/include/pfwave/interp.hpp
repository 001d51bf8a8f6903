#pragma once

// Monotone cubic (Fritsch-Carlson) interpolation on a strictly increasing
// abscissa grid. Monotone data yields a monotone interpolant.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pfwave {

class MonotoneCubic {
public:
    static MonotoneCubic fit(std::vector<double> x, std::vector<double> y) {
        if (x.size() != y.size() || x.size() < 2)
            throw std::invalid_argument("MonotoneCubic::fit: need >= 2 matching samples");
        for (size_t i = 0; i + 1 < x.size(); ++i)
            if (!(x[i + 1] > x[i]))
                throw std::invalid_argument("MonotoneCubic::fit: abscissa must be increasing");

        MonotoneCubic m;
        m.x_ = std::move(x);
        m.y_ = std::move(y);
        const size_t n = m.x_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = m.x_[i + 1] - m.x_[i];
            delta[i] = (m.y_[i + 1] - m.y_[i]) / h[i];
        }
        m.d_.assign(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                m.d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m.d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        m.d_[0] = edge_tangent(h[0], h.size() > 1 ? h[1] : h[0], delta[0],
                               delta.size() > 1 ? delta[1] : delta[0]);
        m.d_[n - 1] = edge_tangent(h[n - 2], n > 2 ? h[n - 3] : h[n - 2], delta[n - 2],
                                   n > 2 ? delta[n - 3] : delta[n - 2]);
        return m;
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    // Evaluate; arguments outside the data range clamp to the end values.
    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const size_t i = static_cast<size_t>(
                             std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

private:
    // One-sided three-point tangent, limited to preserve monotonicity.
    static double edge_tangent(double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0)
            d = 0.0;
        else if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0))
            d = 3.0 * del0;
        return d;
    }

    std::vector<double> x_, y_, d_;
};

} // namespace pfwave
