#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "radlab/params.hpp"

namespace radlab {

// Which operators of  -u'' - (N-1)u'/r + m|u'|^q - u^p = f  are kept.
// Exactly four subsets are meaningful: the full equation, diffusion+gradient,
// diffusion+source, and gradient+source (the latter is first order: the
// derivative is slaved to the value, with the branch picked by sign(du0)).
struct TermSet {
    bool diffusion = true;
    bool gradient = true;
    bool source = true;
};

inline constexpr TermSet kFullTerms{true, true, true};
inline constexpr TermSet kGradientOnlyTerms{true, true, false};
inline constexpr TermSet kSourceOnlyTerms{true, false, true};
inline constexpr TermSet kFirstOrderTerms{false, true, true};

enum class Coordinate {
    radial_r,  // integrate u(r) directly
    log_t,     // integrate V(t) = r^alpha u(r), t = ln r; for stiff ends
};

struct OdeProblem {
    Params params = Params(3, 2.0, 2.0, 1.0);
    TermSet terms;
    Coordinate coordinate = Coordinate::radial_r;
    double start = 1.0;
    double end = 10.0;  // may be smaller than start: integration runs backward
    // Optional inhomogeneity f(r) on the right side (radial coordinate only).
    std::function<double(double)> forcing;
};

struct OdeControls {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    // Slope magnitude that turns a step-floor stop into a clean blow-up verdict.
    double du_cap = 1e12;
    // Value magnitude treated as numerical overflow of the solution.
    double u_cap = 1e290;
    // Value magnitude below which the solution counts as vanished.
    double u_floor = 1e-250;
    // Step size caps: absolute, and relative to |r| (absolute in t for log_t).
    // The relative default keeps the dense-output curvature error of stored
    // profiles below 1e-6 of the local term scale.
    double max_step = 0.0;  // 0 means no absolute cap
    double max_step_rel = 1e-3;
    long max_steps = 4000000;
    bool stop_on_value_zero = true;
    bool stop_on_derivative_zero = false;
    // Extra radii at which the profile is sampled (dense output), in addition
    // to every accepted step. Radii outside the span are ignored.
    std::vector<double> sample_at;
};

enum class StopKind {
    reached_end,
    gradient_blowup,
    solution_vanished,
    solution_crossed_zero,
    derivative_crossed_zero,
    value_exceeded_cap,
};

std::string to_string(StopKind k);

// Sampled trajectory. r is strictly monotone in the integration direction and
// u stays positive on the recorded range; recording truncates at the stop.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du;
    OdeProblem problem;
    StopKind termination = StopKind::reached_end;
    // Non-empty when the verdict needed qualification (step underflow below
    // the slope cap, non-finite arithmetic, ...).
    std::string diagnostic;
    // Radii where du changed sign without stopping the integration.
    std::vector<double> du_zero_radii;
};

struct ShootOutcome {
    StopKind kind = StopKind::reached_end;
    double location = 0.0;  // radius of the stop (or the far end)
    RadialProfile profile;
};

// Integrate from (u0, du0) at problem.start until problem.end or an event.
// Dormand-Prince 4(5) with PI step control; events are located on the cubic
// Hermite dense output to 1e-10 (relative to |r|) in the independent variable.
ShootOutcome integrate(const OdeProblem& problem, double u0, double du0,
                       const OdeControls& controls = {});

struct ShootResult {
    double du0 = 0.0;
    ShootOutcome outcome;
};

// Find du0 in [lo, hi] so the trajectory from u0 reaches problem.end with
// value target. The terminal mismatch must change sign across the bracket
// (blow-up counts as +inf, vanishing or a zero crossing as -inf); otherwise
// BracketError. Converges to |mismatch| <= 1e-9 * max(|target|, floor).
ShootResult shoot(const OdeProblem& problem, double u0, double lo, double hi,
                  double target, const OdeControls& controls = {});

enum class MonitorKind {
    energy_E,   // du^2/2 + u^(p+1)/(p+1)
    F_epsilon,  // u^p - (1+eps) m |du|^q
};

struct MonitorTrace {
    MonitorKind kind = MonitorKind::energy_E;
    double epsilon = 0.0;
    std::vector<double> values;            // one per profile sample
    std::vector<double> sign_change_radii;
};

MonitorTrace monitor(const RadialProfile& profile, MonitorKind kind,
                     double epsilon = 0.0);

}  // namespace radlab
