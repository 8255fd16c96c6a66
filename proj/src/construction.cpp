#include "radlab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "radlab/closed_forms.hpp"
#include "radlab/errors.hpp"
#include "radlab/interp.hpp"

namespace radlab {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double span = std::log(hi / lo);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::exp(span * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

OdeProblem gradient_problem(const Params& P, double r0, double r1) {
    OdeProblem prob;
    prob.params = P;
    prob.terms = kGradientOnlyTerms;
    prob.coordinate = Coordinate::radial_r;
    prob.start = r0;
    prob.end = r1;
    return prob;
}

// Total decrease of the decreasing branch over [r0, tau] for the slope
// parameterized by its first-integral constant A (steeper slope = smaller A).
double drop_for_A(const Params& P, double r0, double tau, double A) {
    const double aexp = 1.0 / (P.q - 1.0);
    const double Y = std::pow(A, -aexp) / std::pow(r0, P.N - 1);
    if (Y == 0.0) return 0.0;
    return 1.0 - riccati_decreasing_map(QuadratureSpec(P, r0, -Y), tau, 1.0);
}

double floor_A(const Params& P) {
    const double aexp = 1.0 / (P.q - 1.0);
    return std::pow(10.0, -std::min(240.0, 280.0 / aexp));
}

// Largest decrease the branch can realize on [r0, tau] within double range.
// For q > 2 this sits a vanishing distance below the finite cap.
double steepest_drop(const Params& P, double r0, double tau) {
    return drop_for_A(P, r0, tau, floor_A(P));
}

double increasing_slope_for_rise(const Params& P, double r0, double tau, double rise) {
    const double Xtau = increasing_X_with_blowup_at(P, r0, tau);
    double hi = 0.0;
    double Thi = -1.0;
    bool bracketed = false;
    for (double eps : {1e-12, 1e-11, 1e-9, 1e-6}) {
        hi = Xtau * (1.0 - eps);
        try {
            Thi = riccati_increasing_map(QuadratureSpec(P, r0, hi), tau);
        } catch (const std::runtime_error&) {
            continue;
        }
        bracketed = true;
        break;
    }
    if (!bracketed)
        throw NumericError("cannot probe the increasing branch near its blow-up slope");
    if (Thi < rise) {
        if (P.q > 2.0) {
            const double tstar = minimal_span_for_rise(P, r0, rise);
            throw ExistenceError("window end " + fmt(tau) +
                                     " is below the minimal span " + fmt(tstar) +
                                     " for a rise of " + fmt(rise),
                                 tstar);
        }
        throw NumericError("cannot resolve the slope for a rise of " + fmt(rise) +
                           " within double precision");
    }
    // rise is monotone in the slope; bisect in log slope for scale-free accuracy
    double shi = std::log(hi);
    double slo = shi - 700.0;
    for (int it = 0; it < 200 && shi - slo > 1e-14; ++it) {
        const double smid = 0.5 * (slo + shi);
        double T;
        try {
            T = riccati_increasing_map(QuadratureSpec(P, r0, std::exp(smid)), tau);
        } catch (const std::runtime_error&) {
            shi = smid;  // stepped past the blow-up slope
            continue;
        }
        (T < rise ? slo : shi) = smid;
    }
    return std::exp(0.5 * (slo + shi));
}

double decreasing_slope_for_drop(const Params& P, double r0, double tau, double drop) {
    const double aexp = 1.0 / (P.q - 1.0);
    const double Afl = floor_A(P);
    const double Y0 = std::max(drop / (tau - r0), 1e-150);
    double A = std::pow(std::pow(r0, P.N - 1) * Y0, 1.0 - P.q);
    A = std::clamp(A, Afl, 1e290);

    double Alo = A, Ahi = A;  // drop_for_A decreases in A
    if (drop_for_A(P, r0, tau, A) < drop) {
        while (true) {
            Alo /= 16.0;
            if (Alo <= Afl) {
                Alo = Afl;
                const double cap = drop_for_A(P, r0, tau, Alo);
                if (cap < drop) {
                    if (P.q > 2.0)
                        throw ExistenceError("requested drop " + fmt(drop) +
                                                 " exceeds the achievable cap " + fmt(cap) +
                                                 " on this window",
                                             cap);
                    throw NumericError("cannot resolve the slope for a drop of " + fmt(drop) +
                                       " within double precision");
                }
                break;
            }
            if (drop_for_A(P, r0, tau, Alo) >= drop) break;
        }
    } else {
        while (drop_for_A(P, r0, tau, Ahi) > drop) {
            Ahi *= 16.0;
            if (Ahi > 1e290)
                throw NumericError("cannot bracket the slope: requested drop " + fmt(drop) +
                                   " is too small to resolve");
        }
    }
    double slo = std::log(Alo), shi = std::log(Ahi);
    for (int it = 0; it < 200 && shi - slo > 1e-14; ++it) {
        const double smid = 0.5 * (slo + shi);
        (drop_for_A(P, r0, tau, std::exp(smid)) >= drop ? slo : shi) = smid;
    }
    return -std::pow(std::exp(0.5 * (slo + shi)), -aexp) / std::pow(r0, P.N - 1);
}

}  // namespace

BvpSpec::BvpSpec(const Params& P, double r0_, double tau_, double a_, double b_)
    : params(P), r0(r0_), tau(tau_), a(a_), b(b_) {
    if (!std::isfinite(r0) || !(r0 > 0.0))
        throw DomainError("two-point data needs r0 > 0");
    if (!std::isfinite(tau) || !(tau > r0))
        throw DomainError("two-point data needs tau > r0");
    if (!std::isfinite(a) || !(a > 0.0))
        throw DomainError("two-point data needs a positive value at the inner edge");
    if (!std::isfinite(b) || !(b >= 0.0))
        throw DomainError("two-point data needs a nonnegative value at the outer edge");
}

double minimal_span_for_rise(const Params& P, double r0, double rise) {
    if (!(P.q > 2.0))
        throw DomainError("minimal span is defined for q > 2 only; every window works below");
    if (P.N < 2) throw DomainError("minimal span requires N >= 2");
    if (!(P.m > 0.0)) throw DomainError("minimal span requires m > 0");
    if (!std::isfinite(r0) || !(r0 > 0.0) || !std::isfinite(rise) || !(rise > 0.0))
        throw DomainError("minimal span requires r0 > 0 and a positive finite rise");

    const double X0 =
        std::pow((P.q * (P.N - 1) - P.N) / (P.m * (P.q - 1.0) * r0), 1.0 / (P.q - 1.0));
    auto rise_cap = [&](double t) {  // total blow-up rise at slope X0 (1 + t)
        const BlowupReport rep = blowup_report(QuadratureSpec(P, r0, X0 * (1.0 + t)));
        if (!rep.C2)
            throw NumericError("blow-up rise unavailable while locating the minimal span");
        return *rep.C2;
    };

    double tlo = 1e-3;  // cap grows without bound toward the threshold slope
    while (rise_cap(tlo) < rise) {
        tlo *= 0.125;
        if (tlo < 1e-14)
            throw NumericError("cannot bracket the minimal span: rise " + fmt(rise) +
                               " too large to resolve");
    }
    double thi = std::max(8.0 * tlo, 1.0);
    while (rise_cap(thi) > rise) {
        thi *= 8.0;
        if (thi > 1e200)
            throw NumericError("cannot bracket the minimal span: rise " + fmt(rise) +
                               " too small to resolve");
    }
    double slo = std::log(tlo), shi = std::log(thi);
    for (int it = 0; it < 200 && shi - slo > 1e-14; ++it) {
        const double smid = 0.5 * (slo + shi);
        (rise_cap(std::exp(smid)) > rise ? slo : shi) = smid;
    }
    const BlowupReport rep =
        blowup_report(QuadratureSpec(P, r0, X0 * (1.0 + std::exp(0.5 * (slo + shi)))));
    if (!rep.radius)
        throw NumericError("minimal span bisection lost the blow-up radius");
    return *rep.radius;
}

double riccati_bvp_slope(const BvpSpec& spec) {
    const Params& P = spec.params;
    if (!(P.m > 0.0))
        throw DomainError("two-point solve requires a positive gradient coefficient");
    if (spec.b == spec.a) return 0.0;
    if (spec.b > spec.a)
        return increasing_slope_for_rise(P, spec.r0, spec.tau, spec.b - spec.a);
    return decreasing_slope_for_drop(P, spec.r0, spec.tau, spec.a - spec.b);
}

RadialProfile solve_riccati_bvp(const BvpSpec& spec) {
    const double X = riccati_bvp_slope(spec);
    OdeProblem prob = gradient_problem(spec.params, spec.r0, spec.tau);
    OdeControls ctl;
    ctl.sample_at = geometric_grid(spec.r0, spec.tau, 129);
    ShootOutcome out = integrate(prob, spec.a, X, ctl);
    const bool grazed_zero = spec.b == 0.0 &&
                             (out.kind == StopKind::solution_vanished ||
                              out.kind == StopKind::solution_crossed_zero) &&
                             out.location > spec.tau * (1.0 - 1e-6);
    if (out.kind != StopKind::reached_end && !grazed_zero)
        throw NumericError(std::string("two-point profile terminated early: ") +
                           to_string(out.kind) + " at r = " + fmt(out.location));
    if (grazed_zero && out.profile.r.back() < spec.tau) {
        // the stop lands inside the final step, so the integrator has no
        // sample at the window end; close the profile with the boundary
        // datum and the first-integral slope there
        out.profile.r.push_back(spec.tau);
        out.profile.u.push_back(0.0);
        out.profile.du.push_back(riccati_slope(QuadratureSpec(spec.params, spec.r0, X),
                                               spec.tau));
    }
    return out.profile;
}

namespace {

struct SuperEval {
    Pchip val;
    Pchip slope;
};

SuperEval make_super(const RadialProfile& w) {
    if (w.r.size() < 2 || w.u.size() != w.r.size() || w.du.size() != w.r.size())
        throw DomainError("supersolution profile needs matching samples, at least two");
    return SuperEval{Pchip(w.r, w.u), Pchip(w.r, w.du)};
}

void check_supersolution(const SuperEval& W, const BvpSpec& s, const ScalarMap& f) {
    const Params& P = s.params;
    if (W.val.front() > s.r0 * (1.0 + 1e-9) || W.val.back() < s.tau * (1.0 - 1e-9))
        throw DomainError("supersolution must cover the window [" + fmt(s.r0) + ", " +
                          fmt(s.tau) + "]");
    // interpolation between supplied samples may dip slightly under the true
    // dominator, so boundary domination gets a small relative allowance
    if (s.a > W.val(s.r0) * (1.0 + 1e-6) + 1e-12)
        throw DomainError("inner boundary value exceeds the supersolution");
    if (s.b > W.val(s.tau) * (1.0 + 1e-6) + 1e-12)
        throw DomainError("outer boundary value exceeds the supersolution");

    std::vector<double> pts;
    pts.push_back(s.r0);
    for (double x : W.val.knots())
        if (x > s.r0 && x < s.tau) pts.push_back(x);
    pts.push_back(s.tau);

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double rm = 0.5 * (pts[i] + pts[i + 1]);
        const double w = W.val(rm);
        if (!(w > 0.0))
            throw DomainError("supersolution must be positive on the window, fails at r = " +
                              fmt(rm));
        const double wp = W.slope(rm);
        const double wpp = W.slope.deriv(rm);
        const double drift = (P.N - 1) / rm * wp;
        const double grad = P.m * std::pow(std::abs(wp), P.q);
        const double src = f(w);
        const double resid = -wpp - drift + grad - src;
        const double scale = std::max({std::abs(wpp), std::abs(drift), grad, std::abs(src)});
        if (resid < -1e-6 * std::max(scale, 1e-300))
            throw DomainError("supersolution fails the comparison inequality at r = " + fmt(rm) +
                              " (residual " + fmt(resid) + " against scale " + fmt(scale) + ")");
    }
}

void check_source(const ScalarMap& f, double vmax) {
    if (!f) throw DomainError("source callback must be set");
    const double f0 = f(0.0);
    if (!(std::abs(f0) <= 1e-300)) throw DomainError("source must vanish at zero");
    double prev = 0.0;
    for (double x : {vmax * 1e-6, vmax * 1e-3, vmax * 0.1, vmax * 0.5, vmax}) {
        const double y = f(x);
        if (!std::isfinite(y) || y < 0.0)
            throw DomainError("source must be finite and nonnegative");
        if (y < prev * (1.0 - 1e-12))
            throw DomainError("source must be nondecreasing");
        prev = y;
    }
}

void existence_gates(const BvpSpec& s) {
    const Params& P = s.params;
    if (!(P.q > 2.0)) return;
    if (s.b > s.a) {
        const double tstar = minimal_span_for_rise(P, s.r0, s.b - s.a);
        if (s.tau < tstar)
            throw ExistenceError("window end " + fmt(s.tau) + " is below the minimal span " +
                                     fmt(tstar) + " for a rise of " + fmt(s.b - s.a),
                                 tstar);
    } else if (s.a > s.b) {
        const double cap = steepest_drop(P, s.r0, s.tau);
        if (s.a - s.b >= cap)
            throw ExistenceError("requested drop " + fmt(s.a - s.b) +
                                     " exceeds the achievable cap " + fmt(cap) +
                                     " on this window",
                                 cap);
    }
}

// One frozen-source two-point solve by shooting on the initial slope.
// General banded LU with partial pivoting; kl/ku are the assembled bandwidths
// and factorization fills at most kl extra superdiagonals.
class BandedLU {
  public:
    BandedLU(int m, int kl, int ku)
        : m_(m), kl_(kl), ku_(ku), w_(2 * kl + ku + 1),
          ab_(static_cast<std::size_t>(w_) * static_cast<std::size_t>(m), 0.0),
          piv_(static_cast<std::size_t>(m), 0) {}

    double& at(int i, int j) {
        return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
                   static_cast<std::size_t>(j) * static_cast<std::size_t>(w_)];
    }

    bool factor() {
        for (int j = 0; j < m_; ++j) {
            const int iend = std::min(m_ - 1, j + kl_);
            int p = j;
            for (int i = j + 1; i <= iend; ++i)
                if (std::abs(at(i, j)) > std::abs(at(p, j))) p = i;
            piv_[static_cast<std::size_t>(j)] = p;
            const int cend = std::min(m_ - 1, j + kl_ + ku_);
            if (p != j)
                for (int c = j; c <= cend; ++c) std::swap(at(j, c), at(p, c));
            const double d = at(j, j);
            if (d == 0.0 || !std::isfinite(d)) return false;
            for (int i = j + 1; i <= iend; ++i) {
                const double l = at(i, j) / d;
                at(i, j) = l;
                for (int c = j + 1; c <= cend; ++c) at(i, c) -= l * at(j, c);
            }
        }
        return true;
    }

    void solve(std::vector<double>& rhs) {
        for (int j = 0; j < m_; ++j) {
            const int p = piv_[static_cast<std::size_t>(j)];
            if (p != j) std::swap(rhs[static_cast<std::size_t>(j)], rhs[static_cast<std::size_t>(p)]);
            const int iend = std::min(m_ - 1, j + kl_);
            for (int i = j + 1; i <= iend; ++i)
                rhs[static_cast<std::size_t>(i)] -= at(i, j) * rhs[static_cast<std::size_t>(j)];
        }
        for (int j = m_ - 1; j >= 0; --j) {
            const int cend = std::min(m_ - 1, j + kl_ + ku_);
            double sum = rhs[static_cast<std::size_t>(j)];
            for (int c = j + 1; c <= cend; ++c)
                sum -= at(j, c) * rhs[static_cast<std::size_t>(c)];
            rhs[static_cast<std::size_t>(j)] = sum / at(j, j);
        }
    }

  private:
    int m_, kl_, ku_, w_;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

// Staggered collocation for the frozen problem, posed in t = ln r for the
// pair v(t), z(t) = r v'(r):
//   dv/dt = z,   dz/dt = -(N-2) z + m r^(2-q) |z|^q - r^2 g(r),
// with v fixed at both ends. v lives on the nodes and z on the cell centers:
// the quadrature row v_{c+1} - v_c = h z_c pins each z individually, and the
// slope row at an interior node feeds the gradient term with the central
// difference of v rather than an average of neighbouring z's. Schemes that
// average z inside the stiff term leave the alternating z mode near the null
// space of the Newton matrix, and once the gradient term dominates the steps
// blow up along it; here that mode lands directly on the z-difference rows.
// Central differences keep second order, and unlike shooting the banded
// solve does not care how fast slope perturbations amplify across the
// window. Rows are scaled by the same weights the residual norm uses so the
// factorization works on O(1) entries.
RadialProfile collocation_solve(const BvpSpec& s, const std::function<double(double)>& source,
                                int n, const Pchip* guess) {
    const Params& P = s.params;
    const double Nm2 = static_cast<double>(P.N) - 2.0;
    const double t0 = std::log(s.r0), t1 = std::log(s.tau);
    const double h = (t1 - t0) / static_cast<double>(n - 1);

    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        r[static_cast<std::size_t>(i)] = std::exp(t0 + h * static_cast<double>(i));
    r.front() = s.r0;
    r.back() = s.tau;
    std::vector<double> rc(static_cast<std::size_t>(n - 1));
    for (int c = 0; c + 1 < n; ++c)
        rc[static_cast<std::size_t>(c)] = std::exp(t0 + h * (static_cast<double>(c) + 0.5));
    std::vector<double> gn(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i + 1 < n; ++i)
        gn[static_cast<std::size_t>(i)] = source ? source(r[static_cast<std::size_t>(i)]) : 0.0;

    std::vector<double> v(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n - 1));
    if (guess) {
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] = (*guess)(r[static_cast<std::size_t>(i)]);
        for (int c = 0; c + 1 < n; ++c)
            z[static_cast<std::size_t>(c)] =
                rc[static_cast<std::size_t>(c)] * guess->deriv(rc[static_cast<std::size_t>(c)]);
    } else {
        const double zc = (s.b - s.a) / (t1 - t0);
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] =
                s.a + (s.b - s.a) * static_cast<double>(i) / static_cast<double>(n - 1);
        std::fill(z.begin(), z.end(), zc);
    }
    v.front() = s.a;
    v.back() = s.b;

    // unknowns interleaved as [z_0, v_1, z_1, ..., v_{n-2}, z_{n-2}]: z_c at
    // column 2c, v_i at column 2i-1; quadrature rows even, slope rows odd
    const int M = 2 * n - 3;

    std::vector<double> F(static_cast<std::size_t>(M)), scale(static_cast<std::size_t>(M));
    const auto residual_norm = [&](const std::vector<double>& vv, const std::vector<double>& zz,
                                   bool record) {
        double worst = 0.0;
        for (int c = 0; c + 1 < n; ++c) {
            const std::size_t j = static_cast<std::size_t>(c);
            const double fv = (vv[j + 1] - vv[j]) - h * zz[j];
            const double sv = std::max({std::abs(vv[j]), std::abs(vv[j + 1]),
                                        std::abs(h * zz[j]), 1e-300});
            if (record) {
                F[static_cast<std::size_t>(2 * c)] = fv;
                scale[static_cast<std::size_t>(2 * c)] = sv;
            }
            worst = std::max(worst, std::abs(fv) / sv);
        }
        for (int i = 1; i + 1 < n; ++i) {
            const std::size_t j = static_cast<std::size_t>(i);
            const double sl = (vv[j + 1] - vv[j - 1]) / (2.0 * h);
            const double grad = P.m * std::pow(r[j], 2.0 - P.q) * std::pow(std::abs(sl), P.q);
            const double frc = r[j] * r[j] * gn[j];
            const double fz = (zz[j] - zz[j - 1]) - h * (-Nm2 * sl + grad - frc);
            const double sz = std::max({std::abs(zz[j - 1]), std::abs(zz[j]),
                                        h * (std::abs(Nm2 * sl) + grad + std::abs(frc)),
                                        1e-300});
            if (record) {
                F[static_cast<std::size_t>(2 * i - 1)] = fz;
                scale[static_cast<std::size_t>(2 * i - 1)] = sz;
            }
            worst = std::max(worst, std::abs(fz) / sz);
        }
        return worst;
    };

    double norm = residual_norm(v, z, true);
    std::vector<double> vt(v), zt(z);
    int stalls = 0;
    for (int it = 0; it < 80 && norm > 1e-12; ++it) {
        BandedLU J(M, 2, 2);
        for (int c = 0; c + 1 < n; ++c) {
            const int rv = 2 * c;
            const double w = 1.0 / scale[static_cast<std::size_t>(rv)];
            if (c >= 1) J.at(rv, 2 * c - 1) = -w;
            if (c + 1 <= n - 2) J.at(rv, 2 * c + 1) = w;
            J.at(rv, 2 * c) = -h * w;
        }
        for (int i = 1; i + 1 < n; ++i) {
            const std::size_t j = static_cast<std::size_t>(i);
            const double sl = (v[j + 1] - v[j - 1]) / (2.0 * h);
            const double as = std::abs(sl);
            const double dgrad =
                P.q * P.m * std::pow(r[j], 2.0 - P.q) *
                (as > 0.0 ? std::pow(as, P.q - 1.0) : 0.0) *
                (sl > 0.0 ? 1.0 : (sl < 0.0 ? -1.0 : 0.0));
            const double phs = -Nm2 + dgrad;
            const int rz = 2 * i - 1;
            const double w = 1.0 / scale[static_cast<std::size_t>(rz)];
            J.at(rz, 2 * i - 2) = -w;
            J.at(rz, 2 * i) = w;
            if (i >= 2) J.at(rz, 2 * i - 3) = 0.5 * phs * w;
            if (i + 2 <= n - 1) J.at(rz, 2 * i + 1) = -0.5 * phs * w;
        }
        if (!J.factor())
            throw NumericError("frozen collocation hit a singular Jacobian");
        std::vector<double> step(static_cast<std::size_t>(M));
        for (int row = 0; row < M; ++row)
            step[static_cast<std::size_t>(row)] =
                -F[static_cast<std::size_t>(row)] / scale[static_cast<std::size_t>(row)];
        J.solve(step);

        double lambda = 1.0;
        bool accepted = false;
        for (int half = 0; half < 24; ++half) {
            for (int i = 1; i + 1 < n; ++i)
                vt[static_cast<std::size_t>(i)] =
                    v[static_cast<std::size_t>(i)] +
                    lambda * step[static_cast<std::size_t>(2 * i - 1)];
            for (int c = 0; c + 1 < n; ++c)
                zt[static_cast<std::size_t>(c)] =
                    z[static_cast<std::size_t>(c)] +
                    lambda * step[static_cast<std::size_t>(2 * c)];
            const double trial = residual_norm(vt, zt, false);
            if (trial < norm * (1.0 - 0.25 * lambda) || trial < 1e-12) {
                v.swap(vt);
                z.swap(zt);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted && ++stalls >= 3) {
            if (norm <= 1e-9) break;  // line search ran into the rounding floor
            throw NumericError("frozen collocation stalled with scaled residual " + fmt(norm));
        }
        norm = residual_norm(v, z, true);
    }
    if (norm > 1e-9)
        throw NumericError("frozen collocation did not converge: scaled residual " + fmt(norm));

    RadialProfile prof;
    prof.problem = gradient_problem(P, s.r0, s.tau);
    prof.problem.forcing = source;
    prof.r = r;
    // boundary corrections excite the scheme's alternating mode at roundoff
    // scale; a 1-2-1 filter removes it exactly while the smooth part only
    // picks up an h^2 bias that is common to every solve on this grid (the
    // central difference below cancels the alternating part on its own)
    prof.u = v;
    for (int i = 1; i + 1 < n; ++i)
        prof.u[static_cast<std::size_t>(i)] =
            0.25 * (v[static_cast<std::size_t>(i - 1)] + 2.0 * v[static_cast<std::size_t>(i)] +
                    v[static_cast<std::size_t>(i + 1)]);
    prof.du.resize(static_cast<std::size_t>(n));
    for (int i = 1; i + 1 < n; ++i)
        prof.du[static_cast<std::size_t>(i)] =
            (v[static_cast<std::size_t>(i + 1)] - v[static_cast<std::size_t>(i - 1)]) /
            (2.0 * h * r[static_cast<std::size_t>(i)]);
    prof.du.front() = (1.5 * z.front() - 0.5 * z[1]) / r.front();
    prof.du.back() = (1.5 * z.back() - 0.5 * z[static_cast<std::size_t>(n - 3)]) / r.back();
    prof.termination = StopKind::reached_end;
    return prof;
}// Shooting loses the far boundary value once the linearized gradient term
// accumulates more than a few dozen nats of slope sensitivity across the
// window, so estimate exp-growth of slope perturbations and route.
double slope_sensitivity(const BvpSpec& s, const Pchip* guess) {
    const Params& P = s.params;
    const int ns = 48;
    double acc = 0.0;
    double prevr = s.r0;
    const double flat = std::abs(s.b - s.a) / (s.tau - s.r0);
    double prevd = guess ? std::abs(guess->deriv(s.r0)) : flat;
    for (int i = 1; i <= ns; ++i) {
        const double ri = s.r0 * std::pow(s.tau / s.r0, static_cast<double>(i) / ns);
        const double di = guess ? std::abs(guess->deriv(ri)) : flat;
        acc += 0.5 * (std::pow(prevd, P.q - 1.0) + std::pow(di, P.q - 1.0)) * (ri - prevr);
        prevr = ri;
        prevd = di;
    }
    return P.q * P.m * acc;
}

// Grid size for the collocation route. Cells where h/2 times the slope
// linearization weight phi = q m r^(2-q) |z|^(q-1) exceeds 1 replace the true
// fast mode with an alternating one whose growth factor is only (1+u)/(1-u);
// it stays out of the Newton steps when the milder cells accumulate damping
// sum 2/u, which for a phi that grows like e^(Et) comes to about
// 4/(h^2 phi_lo E). Size the grid to put that sum near 40 instead of trying
// to resolve phi itself.
int collocation_nodes(const BvpSpec& s, const Pchip* guess) {
    const Params& P = s.params;
    const double span = std::log(s.tau / s.r0);
    const double flat = std::abs(s.b - s.a) / (s.tau - s.r0);
    const double d0 = guess ? std::abs(guess->deriv(s.r0)) : flat;
    const double d1 = guess ? std::abs(guess->deriv(s.tau)) : flat;
    const double phi0 =
        P.q * P.m * std::pow(s.r0, 2.0 - P.q) * std::pow(s.r0 * d0, P.q - 1.0);
    const double phi1 =
        P.q * P.m * std::pow(s.tau, 2.0 - P.q) * std::pow(s.tau * d1, P.q - 1.0);
    const double philo = std::min(phi0, phi1);
    double need = span * 1500.0;
    if (philo > 0.0 && std::isfinite(philo)) {
        const double ee =
            std::max(std::abs(std::log(std::max(phi1, 1e-300) /
                                       std::max(phi0, 1e-300))) / span, 0.5);
        need = std::max(need, span * std::sqrt(10.0 * philo * ee));
    }
    return std::clamp(static_cast<int>(need), 400, 200000);
}

// ncol_lock, when given, pins the collocation grid across repeated solves:
// successive iterates of a source iteration must be compared on a common
// discretization or the per-grid bias (a few 1e-7 of the solution at high
// stiffness) masks the genuine monotone rise once the updates fall below it.
RadialProfile frozen_solve(const BvpSpec& s, const std::function<double(double)>& source,
                           const std::vector<double>& grid, double center, double width,
                           const Pchip* guess, int* ncol_lock) {
    int ncol = (ncol_lock && *ncol_lock > 0) ? *ncol_lock : collocation_nodes(s, guess);
    const auto relax = [&]() {
        try {
            RadialProfile out = collocation_solve(s, source, ncol, guess);
            if (ncol_lock) *ncol_lock = ncol;
            return out;
        } catch (const NumericError&) {
            if (ncol >= 200000) throw;
            ncol = std::min(4 * ncol, 200000);
            RadialProfile out = collocation_solve(s, source, ncol, guess);
            if (ncol_lock) *ncol_lock = ncol;
            return out;
        }
    };
    if (slope_sensitivity(s, guess) > 30.0) return relax();

    OdeProblem prob = gradient_problem(s.params, s.r0, s.tau);
    prob.forcing = source;
    OdeControls ctl;
    ctl.sample_at = grid;

    try {
        double w = width;
        for (int widen = 0; widen < 48; ++widen) {
            try {
                ShootResult sh = shoot(prob, s.a, center - w, center + w, s.b, ctl);
                if (sh.outcome.kind != StopKind::reached_end)
                    throw NumericError(std::string("frozen-source solve terminated early: ") +
                                       to_string(sh.outcome.kind));
                return sh.outcome.profile;
            } catch (const BracketError&) {
                w *= 4.0;
            }
        }
        throw NumericError("frozen-source solve could not bracket the initial slope");
    } catch (const NumericError&) {
        return relax();
    }
}

}  // namespace

IterationResult monotone_iterate(const BvpSpec& spec, const ScalarMap& f,
                                 const RadialProfile& supersolution, double tol, int max_k,
                                 const RadialProfile* start) {
    const Params& P = spec.params;
    if (!(P.m > 0.0))
        throw DomainError("monotone iteration requires a positive gradient coefficient");
    if (!(tol > 0.0) || !std::isfinite(tol) || max_k < 1)
        throw DomainError("monotone iteration needs tol > 0 and max_k >= 1");

    const SuperEval W = make_super(supersolution);
    check_supersolution(W, spec, f);
    double wmax = std::max(spec.a, spec.b);
    for (double x : W.val.knots())
        if (x >= spec.r0 && x <= spec.tau) wmax = std::max(wmax, W.val(x));
    check_source(f, wmax);
    existence_gates(spec);

    const int n = 200;
    const std::vector<double> grid = geometric_grid(spec.r0, spec.tau, n);

    std::shared_ptr<const Pchip> vprev;  // null means the zero start
    std::vector<double> vprev_vals(static_cast<std::size_t>(n), 0.0);
    if (start && !start->r.empty()) {
        if (start->r.size() < 2) throw DomainError("warm start needs at least two samples");
        vprev = std::make_shared<const Pchip>(start->r, start->u);
        for (int i = 0; i < n; ++i)
            vprev_vals[static_cast<std::size_t>(i)] = (*vprev)(grid[static_cast<std::size_t>(i)]);
    }
    std::vector<double> fprev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        fprev[static_cast<std::size_t>(i)] = f(vprev_vals[static_cast<std::size_t>(i)]);

    IterationResult res;
    double prev_gap = 0.0;
    double center = (spec.b - spec.a) / (spec.tau - spec.r0);
    double width = std::max(1.0, 2.0 * std::abs(center));
    int ncol_lock = 0;

    for (int k = 1; k <= max_k; ++k) {
        std::function<double(double)> source;
        if (vprev) {
            auto vp = vprev;
            source = [f, vp](double r) { return f((*vp)(r)); };
        }
        RadialProfile prof =
            frozen_solve(spec, source, grid, center, width, vprev.get(), &ncol_lock);

        const Pchip vk(prof.r, prof.u);
        std::vector<double> vvals(static_cast<std::size_t>(n));
        std::vector<double> fv(static_cast<std::size_t>(n));
        double gap = 0.0, worst_mono = 0.0, worst_super = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t j = static_cast<std::size_t>(i);
            vvals[j] = vk(grid[j]);
            const double sc = std::max(1.0, std::abs(vvals[j]));
            gap = std::max(gap, std::abs(vvals[j] - vprev_vals[j]) / sc);
            worst_mono = std::max(worst_mono, (vprev_vals[j] - vvals[j]) / sc);
            const double wv = W.val(grid[j]);
            worst_super = std::max(worst_super, (vvals[j] - wv) / std::max(1.0, std::abs(wv)));
            fv[j] = f(vvals[j]);
        }
        if (worst_mono > 1e-6)
            throw NumericError("iterate " + std::to_string(k) +
                               " lost monotonicity: worst relative violation " + fmt(worst_mono));
        if (worst_super > 1e-6)
            throw NumericError("iterate " + std::to_string(k) +
                               " escaped the supersolution by " + fmt(worst_super) +
                               " relative");

        IterationState st;
        st.k = k;
        st.v = prof;
        st.sup_gap = gap;
        st.monotone_ok = worst_mono <= 1e-8;
        res.trace.push_back(std::move(st));
        if (k >= 3 && gap > prev_gap * (1.0 + 1e-12)) res.gaps_monotone = false;
        prev_gap = gap;

        bool source_fixed = true;
        for (int i = 0; i < n; ++i)
            if (fv[static_cast<std::size_t>(i)] != fprev[static_cast<std::size_t>(i)]) {
                source_fixed = false;
                break;
            }

        // next shoot starts near this slope with a bracket sized to the change
        const double du0 = prof.du.front();
        width = std::max(1e-6 * (1.0 + std::abs(du0)), 8.0 * std::abs(du0 - center));
        center = du0;

        vprev = std::make_shared<const Pchip>(prof.r, prof.u);
        vprev_vals = std::move(vvals);
        fprev = std::move(fv);

        if (gap < tol || source_fixed) {
            res.converged = true;
            break;
        }
    }
    res.limit = res.trace.back().v;
    return res;
}

ExteriorOutcome exterior_limit(const BvpSpec& spec, const ScalarMap& f,
                               const RadialProfile* supersolution, double tol, int max_k,
                               int max_windows) {
    const Params& P = spec.params;
    if (max_windows < 1) throw DomainError("window doubling needs max_windows >= 1");

    double tau = std::max(2.0 * spec.r0, spec.tau);
    if (P.q > 2.0 && spec.b > spec.a) {
        const double tstar = minimal_span_for_rise(P, spec.r0, spec.b - spec.a);
        if (tau < tstar) tau = tstar * 1.000001;
    }

    RadialProfile synth;
    const RadialProfile* super = supersolution;
    if (!super) {
        const double c = std::max(spec.a, spec.b) * (1.0 + 1e-9);
        synth.r = {0.5 * spec.r0, tau * std::ldexp(1.0, std::min(max_windows + 1, 900))};
        synth.u = {c, c};
        synth.du = {0.0, 0.0};
        super = &synth;
    }

    ExteriorOutcome out;
    RadialProfile prev_limit;
    std::vector<double> prev_grid;
    for (int j = 0; j < max_windows; ++j) {
        const Pchip cover(super->r, super->u);
        if (cover.back() < tau * (1.0 - 1e-9)) break;  // cannot verify past the supersolution

        const BvpSpec sj(P, spec.r0, tau, spec.a, spec.b);
        IterationResult it = monotone_iterate(sj, f, *super, tol, max_k,
                                              prev_limit.r.empty() ? nullptr : &prev_limit);
        if (!it.converged)
            throw NumericError("window at tau = " + fmt(tau) + " did not converge: last gap " +
                               fmt(it.trace.back().sup_gap));
        out.taus.push_back(tau);

        if (!prev_grid.empty()) {
            const Pchip cur(it.limit.r, it.limit.u);
            const Pchip prev(prev_limit.r, prev_limit.u);
            double sup_diff = 0.0, sup_val = 0.0, mono = 0.0;
            for (double r : prev_grid) {
                const double cv = cur(r), pv = prev(r);
                sup_diff = std::max(sup_diff, std::abs(cv - pv));
                sup_val = std::max(sup_val, std::abs(cv));
                if (spec.a >= spec.b) mono = std::max(mono, pv - cv);
            }
            sup_val = std::max(sup_val, 1e-300);
            out.window_gaps.push_back(sup_diff / sup_val);
            if (spec.a >= spec.b && mono / sup_val > 100.0 * tol)
                throw NumericError("window family lost monotonicity in tau: violation " +
                                   fmt(mono / sup_val) + " at tau = " + fmt(tau));
            if (out.window_gaps.back() < tol) {
                out.stabilized = true;
                out.profile = it.limit;
                break;
            }
        }
        out.profile = it.limit;
        prev_limit = it.limit;
        prev_grid = geometric_grid(spec.r0, tau, 200);
        tau *= 2.0;
    }

    // tail class from the least-squares slope of log u over the outer decade
    if (!out.profile.r.empty()) {
        const double redge = out.profile.r.back();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < out.profile.r.size(); ++i) {
            if (out.profile.r[i] < 0.1 * redge || out.profile.u[i] <= 1e-300) continue;
            const double lx = std::log(out.profile.r[i]);
            const double ly = std::log(out.profile.u[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        if (cnt >= 2) {
            const double det = cnt * sxx - sx * sx;
            if (det > 0.0) {
                const double slope = (cnt * sxy - sx * sy) / det;
                if (slope > 0.05)
                    out.behavior = TailBehavior::grows_unbounded;
                else if (slope < -0.05)
                    out.behavior = TailBehavior::decays_to_zero;
            }
        }
    }
    return out;
}

}  // namespace radlab
