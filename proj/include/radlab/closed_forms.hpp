#pragma once

#include <optional>

#include "radlab/params.hpp"

namespace radlab {

// Data for the gradient-only radial problem -v'' - (N-1)v'/r + m|v'|^q = 0 on
// [r0, ...) with initial slope v'(r0) = X. The substitution w = r^{N-1} v'
// gives w' = m r^{(N-1)(1-q)} |w|^q, integrable in closed form, and every map
// below is a quadrature of that first integral.
struct QuadratureSpec {
    Params params;
    double r0;
    double X;  // initial slope; X > 0 increasing branch, X < 0 decreasing, 0 constant

    QuadratureSpec(const Params& P, double r0_, double X_);
};

enum class Direction { increasing, decreasing, constant };
Direction direction_of(const QuadratureSpec& spec);

enum class BlowupKind { finite_radius_gradient_blowup, global, threshold };

// How the increasing-branch slope behaves: a finite radius where v' diverges,
// a globally defined solution, or the threshold slope separating the two.
struct BlowupReport {
    BlowupKind kind;
    std::optional<double> radius;  // present exactly for finite-radius blow-up
    std::optional<double> X0;      // threshold slope, q > N/(N-1) only
    std::optional<double> C1;      // value-increase bound, N >= 3 and X < X0
    std::optional<double> C2;      // total increase up to blow-up, q > 2 only
};

// Singular solution of the gradient-only problem on the punctured space:
// u_k*(r) = int_r^inf s^{1-N} (m(q-1)/(N-q(N-1)) s^{N-q(N-1)} + A_k)^{-1/(q-1)} ds
// with A_k = ((N-2) cN k)^{1-q}, so that r^{N-2} u_k*(r) -> cN k at the origin.
// k = +infinity gives A = 0 and u = xi_m r^{-beta} exactly.
struct SingularRiccati {
    Params params;
    double k;   // mass parameter in (0, +infinity]
    double cN;  // normalization of the fundamental solution

    SingularRiccati(const Params& P, double k_, double cN_);
    SingularRiccati(const Params& P, double k_);  // default normalization
};

struct ProfilePoint {
    double u;
    double du;
    double d2u;
};

// 1/((N-2) |S^{N-1}|); the constant that makes r^{N-2} * (fundamental solution) -> 1.
double default_cN(int N);

// Total increase T_X(r) = v(r) - v(r0) along the increasing branch. Requires
// X > 0 and r0 <= r < blow-up radius.
double riccati_increasing_map(const QuadratureSpec& spec, double r);

// Remaining drop S_X(r) = gap - (v(r0) - v(r)) along the decreasing branch.
// Requires X < 0 and gap > 0; S_X(tau) = 0 characterizes the solution of the
// two-point problem with total drop `gap` on [r0, tau].
double riccati_decreasing_map(const QuadratureSpec& spec, double r, double gap);

// Closed-form slope v'(r) on either branch (r below blow-up for X > 0).
double riccati_slope(const QuadratureSpec& spec, double r);

BlowupReport blowup_report(const QuadratureSpec& spec);

// Slope whose increasing-branch blow-up radius is exactly tau (any case).
double increasing_X_with_blowup_at(const Params& P, double r0, double tau);

// Largest achievable decrease of the decreasing branch over [r0, tau] when
// q > 2 (finite cap); tau may be +infinity. Monotone increasing in tau.
double theta_cap(const Params& P, double r0, double tau);

// Value, slope and curvature of u_k* at radius r > 0.
ProfilePoint singular_riccati_profile(const SingularRiccati& sr, double r);

}  // namespace radlab
