#pragma once

#include <functional>

#include "radlab/errors.hpp"

namespace radlab {

using Integrand = std::function<double(double)>;

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_panels = 4000;
};

struct QuadOutcome {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    int panels = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a, b] (a < b required).
QuadOutcome gk_adaptive(const Integrand& f, double a, double b,
                        const QuadOptions& opt = {});

// Same, but throws NumericError naming `what` when the tolerance is not met.
double integrate_or_throw(const Integrand& f, double a, double b,
                          const char* what, const QuadOptions& opt = {});

// Integral over [a, b] whose integrand behaves like (b-s)^{-strength} at the
// upper endpoint, 0 < strength < 1. Substitutes s = b - tau^kappa with kappa
// chosen so the transformed integrand vanishes at least linearly.
double integrate_upper_singular(const Integrand& f, double a, double b,
                                double strength, const char* what,
                                const QuadOptions& opt = {});

// Mirror case: integrand like (s-a)^{-strength} at the lower endpoint.
double integrate_lower_singular(const Integrand& f, double a, double b,
                                double strength, const char* what,
                                const QuadOptions& opt = {});

// Integral of fd over (0, length] when fd(u) ~ u^{-strength} as u -> 0,
// 0 < strength < 1. fd receives the exact distance u from the singular point,
// never the absolute coordinate, so a caller whose singular factor has a
// stable small-u form (expm1/log1p) keeps full precision where the two
// functions above lose it to cancellation in b - s.
double integrate_singular_origin(const Integrand& fd, double length,
                                 double strength, const char* what,
                                 const QuadOptions& opt = {});

// Integral over [r, infinity) via the map s = r/(1-sigma), sigma in [0,1).
// The integrand must decay fast enough that the transformed one vanishes at
// sigma -> 1 (true of every tail this project integrates).
double integrate_to_infinity(const Integrand& f, double r, const char* what,
                             const QuadOptions& opt = {});

}  // namespace radlab
