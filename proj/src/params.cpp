#include "radlab/params.hpp"

#include <algorithm>
#include <cmath>

namespace radlab {

namespace {

const double kTieRelTol = 1e-12;  // threshold comparisons report "at" inside this

Ternary compare(double x, double threshold) {
    if (std::abs(x - threshold) <= kTieRelTol * std::max(1.0, std::abs(threshold)))
        return Ternary::at;
    return x < threshold ? Ternary::below : Ternary::above;
}

bool nearly(double x, double y) {
    return std::abs(x - y) <= kTieRelTol * std::max(1.0, std::abs(y));
}

double critical_q(double p) { return 2.0 * p / (p + 1.0); }

void require(bool ok, const char* condition) {
    if (!ok) throw DomainError(condition);
}

}  // namespace

Params::Params(int N_, double p_, double q_, double m_) : N(N_), p(p_), q(q_), m(m_) {
    require(N >= 1, "Params requires N >= 1");
    require(p > 0.0, "Params requires p > 0");
    require(q > 1.0, "Params requires q > 1");
    require(m >= 0.0, "Params requires m >= 0");
    require(std::isfinite(p) && std::isfinite(q) && std::isfinite(m),
            "Params requires finite p, q, m");
}

ExponentSet compute_exponents(const Params& P) {
    require(P.p > 1.0, "compute_exponents requires p > 1");
    require(P.q > 1.0, "compute_exponents requires q > 1");
    ExponentSet E;
    E.alpha = 2.0 / (P.p - 1.0);
    E.beta = (2.0 - P.q) / (P.q - 1.0);
    if (!nearly(P.p, P.q)) E.gamma = P.q / (P.p - P.q);
    E.sigma = (P.p + 1.0) * P.q - 2.0 * P.p;
    return E;
}

RegimeReport classify_regime(const Params& P) {
    RegimeReport R;
    R.q_vs_critical = compare(P.q, critical_q(P.p));
    if (nearly(P.q, P.p))
        R.q_vs_p = Ordering::equal;
    else
        R.q_vs_p = P.q < P.p ? Ordering::less : Ordering::greater;
    if (P.N >= 3) {
        R.p_vs_serrin = compare(P.p, double(P.N) / (P.N - 2));
        R.p_vs_sobolev = compare(P.p, double(P.N + 2) / (P.N - 2));
    }
    if (P.N >= 2)
        R.q_vs_removability = compare(P.q, double(P.N) / (P.N - 1));
    else
        R.q_vs_removability = Ternary::below;  // threshold is +infinity for N = 1
    R.q_vs_two = compare(P.q, 2.0);
    return R;
}

double lane_emden_constant(const Params& P) {
    require(P.N >= 3, "lane_emden_constant requires N >= 3");
    require(P.p > double(P.N) / (P.N - 2) * (1.0 + kTieRelTol),
            "lane_emden_constant requires p > N/(N-2)");
    const double alpha = 2.0 / (P.p - 1.0);
    return std::pow(alpha * ((P.N - 2) * P.p - P.N) / (P.p - 1.0), 1.0 / (P.p - 1.0));
}

double riccati_constant(const Params& P) {
    require(P.N >= 3, "riccati_constant requires N >= 3");
    require(P.q < double(P.N) / (P.N - 1) * (1.0 - kTieRelTol),
            "riccati_constant requires q < N/(N-1)");
    require(P.m > 0.0, "riccati_constant requires m > 0");
    const double beta = (2.0 - P.q) / (P.q - 1.0);
    const double core = (P.N - P.q * (P.N - 1)) / (P.m * (P.q - 1.0));
    return std::pow(core, 1.0 / (P.q - 1.0)) / beta;
}

double eikonal_constant(const Params& P) {
    require(!nearly(P.p, P.q), "eikonal_constant requires p != q");
    require(P.m > 0.0, "eikonal_constant requires m > 0");
    const double gamma_abs = std::abs(P.q / (P.p - P.q));
    return std::pow(P.m * std::pow(gamma_abs, P.q), 1.0 / (P.p - P.q));
}

double critical_mass_threshold(const Params& P) {
    require(nearly(P.q, critical_q(P.p)),
            "critical_mass_threshold requires q = 2p/(p+1)");
    require(P.p > 1.0, "critical_mass_threshold requires p > 1");
    if (P.N >= 3)
        require(P.p < double(P.N) / (P.N - 2) * (1.0 - kTieRelTol),
                "critical_mass_threshold requires p < N/(N-2)");
    else
        require(P.N == 2, "critical_mass_threshold requires N = 2 or N >= 3");
    const double core = (P.N - (P.N - 2) * P.p) / (2.0 * P.p);
    return (P.p + 1.0) * std::pow(core, P.p / (P.p + 1.0));
}

namespace {

// Scalar map whose positive zeros are the amplitudes of exact profiles
// x r^{-alpha}:  g(x) = -alpha(alpha+2-N) x + m (alpha x)^q - x^p.
struct ConstMap {
    double c1, c2, p, q;
    double operator()(double x) const {
        return -c1 * x + c2 * std::pow(x, q) - std::pow(x, p);
    }
};

double bisect_root(const ConstMap& g, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if ((gm >= 0.0) == (glo >= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> constant_solution_roots(const Params& P) {
    require(nearly(P.q, critical_q(P.p)),
            "constant_solution_roots requires q = 2p/(p+1)");
    require(P.p > 1.0, "constant_solution_roots requires p > 1");
    const double alpha = 2.0 / (P.p - 1.0);
    ConstMap g{alpha * (alpha + 2.0 - P.N), P.m * std::pow(alpha, P.q), P.p, P.q};

    // dense scan on a log grid, then bisection in each sign-change bracket
    const int n = 10000;
    const double lx0 = std::log(1e-8), lx1 = std::log(1e8);
    std::vector<double> roots;
    double xprev = std::exp(lx0);
    double gprev = g(xprev);
    for (int i = 1; i < n; ++i) {
        double x = std::exp(lx0 + (lx1 - lx0) * i / (n - 1));
        double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if ((gx > 0.0) != (gprev > 0.0) && gprev != 0.0) {
            roots.push_back(bisect_root(g, xprev, x));
        }
        xprev = x;
        gprev = gx;
    }

    // Tangency refinement: with a positive linear coefficient the map is
    // x(phi(x) - c1) with phi = c2 x^{q-1} - x^{p-1} rising to a single interior
    // maximum, so a double root sits exactly where phi peaks. The grid cannot
    // certify that case (the peak grazes zero between grid points).
    if (g.c1 > 0.0 && g.c2 > 0.0 && roots.empty()) {
        double xhat = std::pow(g.c2 * (P.q - 1.0) / (P.p - 1.0), 1.0 / (P.p - P.q));
        double scale = g.c1 * xhat + g.c2 * std::pow(xhat, P.q) + std::pow(xhat, P.p);
        if (std::abs(g(xhat)) <= 1e-11 * scale) roots.push_back(xhat);
    }

    std::sort(roots.begin(), roots.end());
    return roots;
}

ConstantsReport constants_report(const Params& P) {
    ConstantsReport C;
    if (P.N >= 3 && P.p > double(P.N) / (P.N - 2) * (1.0 + kTieRelTol))
        C.omega0 = lane_emden_constant(P);
    if (P.N >= 3 && P.q < double(P.N) / (P.N - 1) * (1.0 - kTieRelTol) && P.m > 0.0)
        C.xi_m = riccati_constant(P);
    if (!nearly(P.p, P.q) && P.m > 0.0) C.X_m = eikonal_constant(P);
    if (nearly(P.q, critical_q(P.p)) && P.p > 1.0) {
        if (P.N == 2 || (P.N >= 3 && P.p < double(P.N) / (P.N - 2) * (1.0 - kTieRelTol)))
            C.mu_star = critical_mass_threshold(P);
        C.x_const_roots = constant_solution_roots(P);
    }
    return C;
}

ExponentIteration exponent_iteration(const Params& P, IterationVariant variant,
                                     double start, double tol, int max_steps) {
    require(start > 0.0, "exponent_iteration requires start > 0");
    require(tol > 0.0, "exponent_iteration requires tol > 0");
    ExponentSet E = compute_exponents(P);

    ExponentIteration out;
    out.schedule.push_back(start);
    out.converged = false;
    out.stop_reason = IterationStop::step_limit;

    if (variant == IterationVariant::suit) {
        require(E.gamma.has_value(), "exponent_iteration(suit) requires p != q");
        double A = start;
        for (int n = 1; n <= max_steps; ++n) {
            double Anext = (A + 1.0) * P.q / P.p;
            out.schedule.push_back(Anext);
            if (std::abs(Anext - A) < tol) {
                out.converged = true;
                out.stop_reason = IterationStop::fixed_point;
                A = Anext;
                break;
            }
            if (!std::isfinite(Anext) || std::abs(Anext) > 1e300) {
                A = Anext;
                break;
            }
            A = Anext;
        }
        out.limit = A;
    } else {
        const double lambda1 = E.alpha;
        const double lambda2 = E.alpha + 2.0 - P.N;
        const double cap = (variant == IterationVariant::si31) ? lambda2 : lambda1;
        if (variant == IterationVariant::si31)
            require(lambda2 > 0.0, "exponent_iteration(si31) requires alpha + 2 - N > 0");
        const double shift = E.sigma / (P.p - 1.0);
        double th = start;
        for (int n = 1; n <= max_steps; ++n) {
            double delta = std::min(P.p * th, P.q * th - shift);
            double thnext = std::min(cap, delta);
            out.schedule.push_back(thnext);
            if (delta >= cap) {
                out.converged = true;
                out.stop_reason = IterationStop::cap_crossed;
                th = thnext;
                break;
            }
            if (std::abs(thnext - th) < tol) {
                out.converged = true;
                out.stop_reason = IterationStop::fixed_point;
                th = thnext;
                break;
            }
            th = thnext;
        }
        out.limit = th;
    }
    out.n_steps = int(out.schedule.size()) - 1;
    return out;
}

const char* to_string(Ternary t) {
    switch (t) {
        case Ternary::below: return "below";
        case Ternary::at: return "at";
        default: return "above";
    }
}

const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::less: return "less";
        case Ordering::equal: return "equal";
        default: return "greater";
    }
}

const char* to_string(IterationVariant v) {
    switch (v) {
        case IterationVariant::suit: return "suit";
        case IterationVariant::si31: return "si31";
        default: return "si34";
    }
}

const char* to_string(IterationStop s) {
    switch (s) {
        case IterationStop::fixed_point: return "fixed_point";
        case IterationStop::cap_crossed: return "cap_crossed";
        default: return "step_limit";
    }
}

}  // namespace radlab
