#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radlab/params.hpp"
#include "radlab/radial_ode.hpp"

namespace radlab {

// Which end of the domain an asymptotic statement is about.
enum class Venue { singularity_at_zero, infinity };

struct FitWindow {
    double r_lo;
    double r_hi;
};

// Log-log least-squares fit u ~ C r^{-lambda} over a window. When the
// log-corrected variant u ~ C r^{-lambda} (-ln r)^{-nu} is attempted and wins
// (max_log_residual reduced at least 10x), lambda, C and max_log_residual
// describe the corrected model and log_corrected carries its extra pieces.
struct LogCorrection {
    double nu;
    double C_log;  // equals C of the preferred fit
};

struct RateFit {
    double lambda;
    double C;
    FitWindow window;
    double max_log_residual;  // sup |ln u - ln model| over the window
    std::optional<LogCorrection> log_corrected;
};

// One tag per alternative in the singular / far-field catalog. unclassified is
// a legitimate outcome, not an error.
enum class CaseTag {
    J1_fundamental,
    J2_log_borderline,
    J3_lane_emden_constant,
    K_i_riccati,
    K_ii_mass,
    D_i_growth,
    D_ii_decay,
    AST1_i,
    AST1_ii,
    AST2,
    unclassified,
};

struct Classification {
    Venue venue = Venue::singularity_at_zero;
    CaseTag tag = CaseTag::unclassified;
    // The constant named by the matched alternative: the closed-form value
    // when the alternative pins one, the fitted free constant otherwise.
    std::optional<double> matched_constant;
    // Sup relative deviation of the profile from the matched model on the
    // fitted window; 0 when unclassified.
    double confidence = 0.0;
    std::string reason;  // why the profile stayed unclassified
};

struct ResidualTrace {
    std::vector<double> r;
    std::vector<double> raw;         // value of the kept operator terms
    std::vector<double> normalized;  // raw over the largest kept term
    double sup = 0.0;                // max of |normalized|
};

enum class BootstrapSide { punctured, exterior };

// Sampled instance of the shift-iteration bound: positive y and Phi on a
// common increasing radius grid, contraction power d in (0,1), loss rate h,
// hypothesis constants C_star and M, base shift eps0 in (0, 1/8].
struct BootstrapInstance {
    double d;
    double h;
    double C_star;
    double M;
    double eps0;
    std::vector<double> r;
    std::vector<double> y;
    std::vector<double> phi;
    BootstrapSide side = BootstrapSide::punctured;
};

struct BootstrapResult {
    bool bound_holds;
    double c1_observed;  // smallest constant verifying y <= c (Phi)^{1/(1-d)}
    double c1_formula;   // explicit constant of the iteration proof
};

struct GrowthDomination {
    bool dominates;
    double C;  // smallest shift with u >= X_m r^{q/(q-p)} (1 - C/r) on the window
};

struct GradientBoundReport {
    bool ok;  // slope_ok && value_ok
    bool slope_ok;
    double c_slope;  // smallest constant in the slope envelope bound
    bool value_ok;
    double c_value;  // smallest constant in the value envelope bound
    FitWindow window;
};

// Innermost (singularity) or outermost (infinity) two decades covered by the
// profile; narrower profiles yield their full span and fit_rate then rejects.
FitWindow default_fit_window(const RadialProfile& profile, Venue venue);

// Least squares on (ln r, ln u). Requires u > 0 on the window and a sampled
// span of at least two decades. The log-corrected variant is attempted for
// singularity fits when the profile's p sits on N/(N-2) and the window stays
// below r = 1.
RateFit fit_rate(const RadialProfile& profile, Venue venue, FitWindow window);

// Matches the fitted rate and constant against the catalog of alternatives
// whose parameter regime holds: exponents to 1e-2 relative, constants to
// 5e-2. Never throws; failures come back as unclassified with a reason.
Classification classify(const RadialProfile& profile, const Params& P, Venue venue);

// Pointwise value of the kept terms of -u'' - (N-1)u'/r + m|u'|^q - u^p along
// the profile, normalized by the largest kept term. The curvature is taken
// from the sampled slope by local quartic differentiation.
ResidualTrace residual(const RadialProfile& profile, const Params& P, TermSet terms);

// Fits the smallest C with u >= X_m r^{q/(q-p)} (1 - C/r) on the window and
// reports whether that bound is meaningful there (C below the window start).
// Requires q > p.
GrowthDomination growth_domination_check(const RadialProfile& profile, const Params& P,
                                         FitWindow window);

// Verifies the sampled shift-iteration hypothesis for eps0, eps0/2, ... (at
// eps0 alone when h <= 0, where the halvings are not needed), then checks
// y <= c1 Phi^{1/(1-d)} against the explicit constant
// c1 = (C* eps0^{-h})^{1/(1-d)} 2^{h/(1-d)^2} M^{d/(1-d)}  (2-factor absent
// for h <= 0). Throws DomainError when the hypothesis fails on the grid.
BootstrapResult bootstrap_check(const BootstrapInstance& inst);

// Envelope check of the slope bounds |u'| <= c r^{-1/(q-1)} near zero,
// |u'| <= c r^{p/(q-p)} near infinity, plus their integrated value-bound
// companions (bounded / log / r^{-(2-q)/(q-1)} near zero by the position of q
// against 2, r^{q/(q-p)} near infinity). Requires q > p > 1. A check passes
// when the envelope constant is stable toward the venue end instead of
// growing decade over decade.
GradientBoundReport gradient_bound_check(const RadialProfile& profile, const Params& P,
                                         Venue venue);

// One-line JSON report {params, venue, case, lambda, C, residual, window}.
std::string classification_report_json(const Params& P, Venue venue,
                                       const Classification& cls, const RateFit& fit);

const char* to_string(Venue v);
const char* to_string(CaseTag t);
const char* to_string(BootstrapSide s);

}  // namespace radlab
