#pragma once

#include <cstddef>
#include <vector>

#include "radlab/errors.hpp"

namespace radlab {

// Shape-preserving piecewise-cubic interpolant (Fritsch-Carlson slopes).
// Monotone data produces a monotone interpolant; general data never
// overshoots between neighbouring samples. Evaluation outside the abscissa
// range clamps to the end values (derivatives are zero there), which callers
// rely on when a profile stops a hair short of its nominal window.
class Pchip {
public:
    // x strictly increasing, sizes equal, at least one point.
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double deriv(double x) const;
    // Second derivative of the local cubic. Only piecewise continuous.
    double second(double x) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }
    const std::vector<double>& knots() const { return x_; }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;  // endpoint slopes per sample
};

}  // namespace radlab
