#pragma once

#include <functional>
#include <vector>

#include "radlab/params.hpp"
#include "radlab/radial_ode.hpp"

namespace radlab {

// Two-point data for the gradient-only problem on [r0, tau]: value a at r0,
// value b at tau. a > 0, b >= 0, tau > r0 > 0.
struct BvpSpec {
    Params params;
    double r0;
    double tau;
    double a;
    double b;

    BvpSpec(const Params& P, double r0_, double tau_, double a_, double b_);
};

// Initial slope of the unique monotone solution, found by bisection on the
// closed-form branch maps. Throws ExistenceError (threshold attached) when
// q > 2 and the requested boundary data is not attainable on the window:
// for b > a the threshold is the minimal admissible window end, for a > b
// the largest drop the decreasing branch can realize over [r0, tau].
double riccati_bvp_slope(const BvpSpec& spec);

// Smallest window end tau* admitting an increasing solution that rises by
// `rise` from r0. Defined for q > 2 (shorter windows cap the rise through
// the gradient blow-up); every window works for q <= 2.
double minimal_span_for_rise(const Params& P, double r0, double rise);

// Solves the two-point problem and materializes the solution as an
// integrated profile (boundary values match the data to solver accuracy).
RadialProfile solve_riccati_bvp(const BvpSpec& spec);

struct IterationState {
    int k = 0;
    RadialProfile v;
    double sup_gap = 0.0;   // sup |v_k - v_{k-1}| / max(1, |v_k|) on the grid
    bool monotone_ok = true;
};

struct IterationResult {
    RadialProfile limit;
    std::vector<IterationState> trace;
    bool converged = false;
    bool gaps_monotone = true;  // sup_gap nonincreasing after the first step
};

using ScalarMap = std::function<double(double)>;

// Monotone source iteration: v_0 = start (zero when null), and v_k solves the
// gradient-only two-point problem with the source term frozen at f(v_{k-1}),
// by shooting on the initial slope. f must be nondecreasing, nonnegative,
// with f(0) = 0; no Lipschitz assumption is needed since f only ever enters
// through frozen profiles. The supersolution is any sampled profile covering
// [r0, tau] that satisfies the comparison inequality up to 1e-6 relative
// (checked at its grid midpoints before iterating); every iterate must stay
// below it. Stops when the relative sup gap falls under tol; non-convergence
// within max_k is reported through the flags, not thrown.
IterationResult monotone_iterate(const BvpSpec& spec, const ScalarMap& f,
                                 const RadialProfile& supersolution,
                                 double tol = 1e-8, int max_k = 200,
                                 const RadialProfile* start = nullptr);

enum class TailBehavior { grows_unbounded, decays_to_zero, undetermined };

struct ExteriorOutcome {
    RadialProfile profile;  // solution on the largest computed window
    TailBehavior behavior = TailBehavior::undetermined;
    std::vector<double> taus;
    std::vector<double> window_gaps;  // agreement of successive windows
    bool stabilized = false;
};

// Exterior solution by window doubling: solves the two-point problem on
// [r0, tau_j] with tau_j doubling from max(2 r0, spec.tau) (raised past the
// minimal span when q > 2 forces one), warm-starting each window from the
// previous limit, until successive windows agree to tol on the common part.
// A null supersolution synthesizes the constant max(a, b), which passes the
// comparison precheck only for a vanishing source; any real source needs a
// caller-supplied profile covering every window the doubling can reach.
ExteriorOutcome exterior_limit(const BvpSpec& spec, const ScalarMap& f,
                               const RadialProfile* supersolution = nullptr,
                               double tol = 1e-8, int max_k = 200,
                               int max_windows = 12);

}  // namespace radlab
