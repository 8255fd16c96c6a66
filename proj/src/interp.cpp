#include "radlab/interp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace radlab {

namespace {

double copy_sign_or_zero(double magnitude, double like) {
    if (like == 0.0) return 0.0;
    return like > 0.0 ? magnitude : -magnitude;
}

}  // namespace

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n == 0 || y_.size() != n)
        throw DomainError("interpolant needs matching, nonempty abscissae and values");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(x_[i] < x_[i + 1]))
            throw DomainError("interpolant abscissae must be strictly increasing");
    }
    if (!std::isfinite(x_.front()) || !std::isfinite(x_.back()))
        throw DomainError("interpolant abscissae must be finite");

    d_.assign(n, 0.0);
    if (n == 1) return;
    if (n == 2) {
        const double slope = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        d_[0] = d_[1] = slope;
        return;
    }

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] == 0.0 || delta[i] == 0.0 ||
            (delta[i - 1] > 0.0) != (delta[i] > 0.0)) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }

    // Three-point end slopes, clipped so the end panels stay shape-preserving.
    auto end_slope = [](double h0, double h1, double del0, double del1) {
        double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d == 0.0 || (d > 0.0) != (del0 > 0.0)) {
            d = 0.0;
        } else if ((del0 > 0.0) != (del1 > 0.0) && std::abs(d) > 3.0 * std::abs(del0)) {
            d = copy_sign_or_zero(3.0 * std::abs(del0), del0);
        }
        return del0 == 0.0 ? 0.0 : d;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t Pchip::interval(double x) const {
    // Rightmost interval whose left edge is <= x; callers clamp the range.
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double Pchip::operator()(double x) const {
    if (x_.size() == 1 || x <= x_.front()) return x <= x_.front() ? y_.front() : y_.back();
    if (x >= x_.back()) return y_.back();
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 1.0 - 3.0 * t2 + 2.0 * t3;
    const double h10 = t - 2.0 * t2 + t3;
    const double h01 = 3.0 * t2 - 2.0 * t3;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::deriv(double x) const {
    // flat extension outside the range; the boundary knots themselves keep
    // their one-sided end slopes
    if (x_.size() == 1 || x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double g00 = (-6.0 * t + 6.0 * t2) / h;
    const double g10 = 1.0 - 4.0 * t + 3.0 * t2;
    const double g01 = (6.0 * t - 6.0 * t2) / h;
    const double g11 = 3.0 * t2 - 2.0 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double Pchip::second(double x) const {
    if (x_.size() == 1 || x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double s00 = (-6.0 + 12.0 * t) / (h * h);
    const double s10 = (-4.0 + 6.0 * t) / h;
    const double s01 = (6.0 - 12.0 * t) / (h * h);
    const double s11 = (6.0 * t - 2.0) / h;
    return s00 * y_[i] + s10 * d_[i] + s01 * y_[i + 1] + s11 * d_[i + 1];
}

}  // namespace radlab
