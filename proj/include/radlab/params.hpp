#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radlab/errors.hpp"

namespace radlab {

// Problem data for -Delta u + m|grad u|^q - u^p = 0 on a radial domain.
struct Params {
    int N;
    double p;
    double q;
    double m;

    Params(int N_, double p_, double q_, double m_);
};

// Scaling exponents attached to the equation. gamma is defined only when p != q.
struct ExponentSet {
    double alpha;                 // 2/(p-1)
    double beta;                  // (2-q)/(q-1)
    std::optional<double> gamma;  // q/(p-q), absent when p == q
    double sigma;                 // (p+1)q - 2p
};

enum class Ternary { below, at, above };
enum class Ordering { less, equal, greater };

// Where the parameters sit relative to every structural threshold.
// Comparisons hold an "at" verdict within relative tolerance 1e-12.
struct RegimeReport {
    Ternary q_vs_critical;                  // q vs 2p/(p+1)
    Ordering q_vs_p;                        // q vs p
    std::optional<Ternary> p_vs_serrin;     // p vs N/(N-2), absent for N <= 2
    std::optional<Ternary> p_vs_sobolev;    // p vs (N+2)/(N-2), absent for N <= 2
    Ternary q_vs_removability;              // q vs N/(N-1)  (N >= 2)
    Ternary q_vs_two;                       // q vs 2
};

// Closed-form constants, each present exactly when its validity regime holds.
struct ConstantsReport {
    std::optional<double> omega0;       // N >= 3, p > N/(N-2)
    std::optional<double> xi_m;         // N >= 3, 1 < q < N/(N-1), m > 0
    std::optional<double> X_m;          // p != q, m > 0
    std::optional<double> mu_star;      // critical line, subcritical p
    std::vector<double> x_const_roots;  // critical line only
    std::optional<double> theta_cap;    // not filled here (needs r0, tau): see closed_forms
};

enum class IterationVariant { suit, si31, si34 };
enum class IterationStop { fixed_point, cap_crossed, step_limit };

struct ExponentIteration {
    std::vector<double> schedule;
    double limit;
    bool converged;
    int n_steps;
    IterationStop stop_reason;
};

// --- operations ---

// Requires p > 1 and q > 1 (alpha and beta must exist).
ExponentSet compute_exponents(const Params& P);

RegimeReport classify_regime(const Params& P);

// omega_0 = (alpha((N-2)p - N)/(p-1))^{1/(p-1)}; requires N >= 3 and p > N/(N-2).
double lane_emden_constant(const Params& P);

// xi_m = (1/beta)((N - q(N-1))/(m(q-1)))^{1/(q-1)}; requires N >= 3,
// 1 < q < N/(N-1), m > 0.
double riccati_constant(const Params& P);

// X_m = (m |gamma|^q)^{1/(p-q)}; requires p != q and m > 0.
double eikonal_constant(const Params& P);

// mu* = (p+1)((N-(N-2)p)/(2p))^{p/(p+1)}; requires q = 2p/(p+1) (within 1e-12
// relative) and either N = 2 with p > 1, or N >= 3 with 1 < p < N/(N-2).
double critical_mass_threshold(const Params& P);

// Positive roots x of -alpha(alpha+2-N) x + m (alpha x)^q - x^p = 0, sorted
// ascending; each is the amplitude of an exact profile x r^{-alpha} of the full
// equation. Requires the critical line q = 2p/(p+1). 0, 1 or 2 roots.
std::vector<double> constant_solution_roots(const Params& P);

ConstantsReport constants_report(const Params& P);

// Exponent-improvement recursions. suit: A_n = (A_{n-1}+1) q/p toward gamma
// (requires p != q). si31/si34: delta_n = min{p th_{n-1}, q th_{n-1} - sigma/(p-1)},
// th_n = min{cap, delta_n} with cap = alpha+2-N (si31, must be positive) or
// alpha (si34). Non-convergence within max_steps is reported, never thrown.
ExponentIteration exponent_iteration(const Params& P, IterationVariant variant,
                                     double start, double tol = 1e-10,
                                     int max_steps = 10000);

const char* to_string(Ternary t);
const char* to_string(Ordering o);
const char* to_string(IterationVariant v);
const char* to_string(IterationStop s);

}  // namespace radlab
