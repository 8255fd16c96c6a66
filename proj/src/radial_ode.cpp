#include "radlab/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "radlab/errors.hpp"

namespace radlab {

namespace {

constexpr double kHuge = 1e300;
constexpr double kSlopeClamp = 1e-300;

double sign_pow(double v, double e) {
    if (v == 0.0) return 0.0;
    return v > 0.0 ? std::pow(v, e) : -std::pow(-v, e);
}

// Dormand-Prince 4(5) tableau, FSAL form: stage 7 is the derivative at the
// accepted point and doubles as stage 1 of the next step.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[] = {1.0 / 5};
constexpr double kA3[] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                          -212.0 / 729};
constexpr double kA6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                          49.0 / 176, -5103.0 / 18656};
constexpr double kB[] = {35.0 / 384,     0.0,      500.0 / 1113, 125.0 / 192,
                         -2187.0 / 6784, 11.0 / 84};
constexpr double kE[7] = {71.0 / 57600, 0.0,        -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

using State = std::array<double, 2>;

struct Phys {
    double r;
    double u;
    double du;
};

// Right side in one of three shapes: the second-order radial equation, its
// log-variable form V(t) = r^alpha u(r), or the first-order reduction where
// the slope is slaved to the value.
struct Model {
    enum class Kind { second_radial, second_log, first_order };

    Kind kind = Kind::second_radial;
    Params P = Params(3, 2.0, 2.0, 1.0);
    TermSet terms;
    std::function<double(double)> forcing;
    int dim = 2;
    double alpha = 0.0;   // log form only
    double grow = 0.0;    // log form: exponent rate of the gradient weight
    double branch = 1.0;  // first-order form: sign of the slope
    double mroot = 0.0;   // first-order form: m^(-1/q)

    double slave(double v) const {
        return branch * mroot * std::pow(std::abs(v), P.p / P.q);
    }

    void rhs(double x, const State& y, State& f) const {
        switch (kind) {
            case Kind::second_radial: {
                f[0] = y[1];
                double acc = -(P.N - 1) * y[1] / x;
                if (terms.gradient) {
                    double aw = std::abs(y[1]);
                    if (aw >= kSlopeClamp) acc += P.m * std::pow(aw, P.q);
                }
                if (terms.source) acc -= sign_pow(y[0], P.p);
                if (forcing) acc -= forcing(x);
                f[1] = acc;
                return;
            }
            case Kind::second_log: {
                double V = y[0];
                double W = y[1];
                f[0] = W;
                double acc = -(P.N - 2 - 2 * alpha) * W -
                             alpha * (alpha + 2 - P.N) * V;
                if (terms.gradient) {
                    double aw = std::abs(W - alpha * V);
                    if (aw >= kSlopeClamp)
                        acc += P.m * std::exp(grow * x) * std::pow(aw, P.q);
                }
                if (terms.source) acc -= sign_pow(V, P.p);
                f[1] = acc;
                return;
            }
            case Kind::first_order:
                f[0] = slave(y[0]);
                f[1] = 0.0;
                return;
        }
    }

    Phys phys(double x, const State& y) const {
        switch (kind) {
            case Kind::second_radial:
                return {x, y[0], y[1]};
            case Kind::second_log: {
                double r = std::exp(x);
                double u = std::exp(-alpha * x) * y[0];
                double du = std::exp(-(alpha + 1) * x) * (y[1] - alpha * y[0]);
                return {r, u, du};
            }
            case Kind::first_order:
                return {x, y[0], slave(y[0])};
        }
        return {x, y[0], y[1]};
    }
};

Model make_model(const OdeProblem& prob, double du0) {
    const TermSet& t = prob.terms;
    bool second = t.diffusion && t.gradient && !t.source;
    second = second || (t.diffusion && !t.gradient && t.source);
    second = second || (t.diffusion && t.gradient && t.source);
    bool first = !t.diffusion && t.gradient && t.source;
    if (!second && !first)
        throw DomainError(
            "active terms must be diffusion+gradient, diffusion+source, "
            "gradient+source, or all three");
    if (prob.coordinate == Coordinate::log_t && !t.diffusion)
        throw DomainError("log coordinate requires the diffusion term");
    if (prob.forcing && prob.coordinate == Coordinate::log_t)
        throw DomainError("forcing requires the radial coordinate");
    if (prob.forcing && first)
        throw DomainError("forcing requires the diffusion term");

    Model M;
    M.P = prob.params;
    M.terms = t;
    M.forcing = prob.forcing;
    if (first) {
        if (!(prob.params.m > 0.0))
            throw DomainError("first-order reduction requires m > 0");
        if (du0 == 0.0)
            throw DomainError(
                "first-order reduction needs nonzero du0 to pick the slope "
                "branch");
        M.kind = Model::Kind::first_order;
        M.dim = 1;
        M.branch = du0 > 0.0 ? 1.0 : -1.0;
        M.mroot = std::pow(prob.params.m, -1.0 / prob.params.q);
    } else if (prob.coordinate == Coordinate::log_t) {
        if (!(prob.params.p > 1.0))
            throw DomainError("log coordinate requires p > 1");
        M.kind = Model::Kind::second_log;
        M.alpha = 2.0 / (prob.params.p - 1.0);
        double sigma = (prob.params.p + 1.0) * prob.params.q - 2.0 * prob.params.p;
        M.grow = -sigma / (prob.params.p - 1.0);
    }
    return M;
}

// Cubic Hermite over one accepted step, per component; exact at both ends.
struct Dense {
    double h;
    State y0, f0, y1, f1;
    int dim;

    State at(double theta) const {
        double t2 = theta * theta;
        double t3 = t2 * theta;
        double h00 = 1.0 - 3.0 * t2 + 2.0 * t3;
        double h10 = theta - 2.0 * t2 + t3;
        double h01 = 3.0 * t2 - 2.0 * t3;
        double h11 = t3 - t2;
        State y{0.0, 0.0};
        for (int i = 0; i < dim; ++i)
            y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        return y;
    }
};

// Locate a sign change of g over [ta, tb] (g(ta) and g(tb) straddle zero) to
// 1e-10 absolute in the independent variable, or machine precision if coarser.
double bisect_event(const std::function<double(double)>& g, double ta,
                    double tb, double ga, double x_base, double h) {
    double tol_x = std::max(1e-10, std::abs(x_base) * 4e-16);
    for (int it = 0; it < 200 && std::abs(tb - ta) * std::abs(h) > tol_x; ++it) {
        double tm = 0.5 * (ta + tb);
        double gm = g(tm);
        if (gm == 0.0) return tm;
        if ((ga < 0.0) == (gm < 0.0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
        }
    }
    return 0.5 * (ta + tb);
}

std::string fmt_radius(double r) {
    std::ostringstream os;
    os.precision(17);
    os << r;
    return os.str();
}

}  // namespace

std::string to_string(StopKind k) {
    switch (k) {
        case StopKind::reached_end: return "reached_end";
        case StopKind::gradient_blowup: return "gradient_blowup";
        case StopKind::solution_vanished: return "solution_vanished";
        case StopKind::solution_crossed_zero: return "solution_crossed_zero";
        case StopKind::derivative_crossed_zero: return "derivative_crossed_zero";
        case StopKind::value_exceeded_cap: return "value_exceeded_cap";
    }
    return "unknown";
}

ShootOutcome integrate(const OdeProblem& prob, double u0, double du0,
                       const OdeControls& ctl) {
    Model M = make_model(prob, du0);
    if (!(std::isfinite(prob.start) && std::isfinite(prob.end)) ||
        !(prob.start > 0.0) || !(prob.end > 0.0) || prob.start == prob.end)
        throw DomainError("integration span requires 0 < start, 0 < end, start != end");
    if (!(u0 > 0.0) || !std::isfinite(u0))
        throw DomainError("integrate requires u0 > 0");
    if (!std::isfinite(du0)) throw DomainError("integrate requires finite du0");
    if (!(ctl.rel_tol > 0.0) || !(ctl.max_step_rel > 0.0) || ctl.max_steps < 1)
        throw DomainError("controls require rel_tol > 0, max_step_rel > 0, max_steps >= 1");

    const bool logc = M.kind == Model::Kind::second_log;
    const double x0 = logc ? std::log(prob.start) : prob.start;
    const double x1 = logc ? std::log(prob.end) : prob.end;
    const double dir = x1 > x0 ? 1.0 : -1.0;

    State y{u0, du0};
    if (logc) {
        double ra = std::pow(prob.start, M.alpha);
        y[0] = ra * u0;
        y[1] = M.alpha * y[0] + ra * prob.start * du0;
    }
    if (M.kind == Model::Kind::first_order) y[1] = 0.0;

    // Requested sample locations, converted to the active coordinate and
    // ordered in the direction of travel, interior to the span.
    std::vector<double> xs;
    xs.reserve(ctl.sample_at.size());
    for (double r : ctl.sample_at) {
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        double xr = logc ? std::log(r) : r;
        if (dir * (xr - x0) > 0.0 && dir * (xr - x1) <= 0.0) xs.push_back(xr);
    }
    std::sort(xs.begin(), xs.end());
    if (dir < 0.0) std::reverse(xs.begin(), xs.end());
    std::size_t next_xs = 0;

    ShootOutcome out;
    RadialProfile& prof = out.profile;
    prof.problem = prob;

    auto append = [&](const Phys& ph) {
        if (!prof.r.empty() && prof.r.back() == ph.r) return;
        prof.r.push_back(ph.r);
        prof.u.push_back(ph.u);
        prof.du.push_back(ph.du);
    };

    auto max_step_at = [&](double x) {
        double cap = logc ? ctl.max_step_rel
                          : ctl.max_step_rel * std::max(std::abs(x), 1e-290);
        if (ctl.max_step > 0.0) cap = std::min(cap, ctl.max_step);
        return cap;
    };
    auto floor_at = [&](double x) {
        return 1e-14 * std::max(logc ? 1.0 : 1e-290, std::abs(x));
    };

    double x = x0;
    State k1;
    M.rhs(x, y, k1);
    append(M.phys(x, y));

    auto finish = [&](StopKind kind, double x_at, std::string diag) {
        prof.termination = kind;
        prof.diagnostic = std::move(diag);
        out.kind = kind;
        out.location = logc ? std::exp(x_at) : x_at;
        return out;
    };

    double h = dir * std::min(max_step_at(x), std::abs(x1 - x0));
    double errold = 1e-4;
    bool just_rejected = false;
    bool nonfinite_reject = false;

    for (long step = 0; step < ctl.max_steps; ++step) {
        double hcap = max_step_at(x);
        if (std::abs(h) > hcap) h = dir * hcap;
        bool last = false;
        if (dir * (x + h - x1) >= 0.0) {
            h = x1 - x;
            last = true;
        }
        if (std::abs(x1 - x) <= floor_at(x)) {
            return finish(StopKind::reached_end, x1, "");
        }
        if (!last && std::abs(h) < floor_at(x)) {
            Phys ph = M.phys(x, y);
            if (nonfinite_reject)
                return finish(StopKind::value_exceeded_cap, x,
                              "non-finite arithmetic at r = " + fmt_radius(ph.r));
            std::string diag;
            if (std::abs(ph.du) < ctl.du_cap)
                diag = "step size underflow below the slope cap at r = " +
                       fmt_radius(ph.r);
            return finish(StopKind::gradient_blowup, x, diag);
        }

        // One Dormand-Prince attempt.
        State k2, k3, k4, k5, k6, k7, yt, ynew;
        auto stage = [&](const double* a, int n, double c, State& ko) {
            for (int i = 0; i < M.dim; ++i) {
                double acc = y[i];
                const State* ks[] = {&k1, &k2, &k3, &k4, &k5};
                for (int j = 0; j < n; ++j) acc += h * a[j] * (*ks[j])[i];
                yt[i] = acc;
            }
            M.rhs(x + c * h, yt, ko);
        };
        stage(kA2, 1, kC[1], k2);
        stage(kA3, 2, kC[2], k3);
        stage(kA4, 3, kC[3], k4);
        stage(kA5, 4, kC[4], k5);
        stage(kA6, 5, kC[5], k6);
        for (int i = 0; i < M.dim; ++i)
            ynew[i] = y[i] + h * (kB[0] * k1[i] + kB[2] * k3[i] + kB[3] * k4[i] +
                                  kB[4] * k5[i] + kB[5] * k6[i]);
        M.rhs(x + h, ynew, k7);

        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < M.dim; ++i) {
            if (!std::isfinite(ynew[i]) || !std::isfinite(k7[i])) finite = false;
            double ev = h * (kE[0] * k1[i] + kE[2] * k3[i] + kE[3] * k4[i] +
                             kE[4] * k5[i] + kE[5] * k6[i] + kE[6] * k7[i]);
            double sc = ctl.abs_tol +
                        ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            if (sc == 0.0) {
                if (ev != 0.0) finite = false;
                continue;
            }
            double q = ev / sc;
            err += q * q;
        }
        err = std::sqrt(err / M.dim);

        if (!finite || !std::isfinite(err)) {
            h *= 0.25;
            just_rejected = true;
            nonfinite_reject = true;
            continue;
        }
        nonfinite_reject = false;

        if (err > 1.0) {
            double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            just_rejected = true;
            continue;
        }

        // Accepted. Scan the step for events on the dense output.
        Dense dn{h, y, k1, ynew, k7, M.dim};
        Phys ph0 = M.phys(x, y);
        Phys ph1 = M.phys(x + h, ynew);
        auto phys_at = [&](double theta) { return M.phys(x + theta * h, dn.at(theta)); };

        double theta_stop = 2.0;
        StopKind kind_stop = StopKind::reached_end;
        auto offer = [&](double theta, StopKind kind) {
            if (theta < theta_stop) {
                theta_stop = theta;
                kind_stop = kind;
            }
        };

        if (ctl.stop_on_value_zero && ph1.u <= 0.0) {
            std::function<double(double)> g = [&](double t) { return phys_at(t).u; };
            offer(bisect_event(g, 0.0, 1.0, ph0.u, x, h),
                  StopKind::solution_crossed_zero);
        } else if (ph1.u > 0.0 && ph1.u < ctl.u_floor && ph0.u >= ctl.u_floor) {
            std::function<double(double)> g = [&](double t) {
                return phys_at(t).u - ctl.u_floor;
            };
            offer(bisect_event(g, 0.0, 1.0, ph0.u - ctl.u_floor, x, h),
                  StopKind::solution_vanished);
        }
        if (std::abs(ph1.u) >= ctl.u_cap && std::abs(ph0.u) < ctl.u_cap) {
            std::function<double(double)> g = [&](double t) {
                return std::abs(phys_at(t).u) - ctl.u_cap;
            };
            offer(bisect_event(g, 0.0, 1.0, std::abs(ph0.u) - ctl.u_cap, x, h),
                  StopKind::value_exceeded_cap);
        }
        double theta_du = 2.0;
        if (ph0.du * ph1.du < 0.0) {
            std::function<double(double)> g = [&](double t) { return phys_at(t).du; };
            theta_du = bisect_event(g, 0.0, 1.0, ph0.du, x, h);
            if (ctl.stop_on_derivative_zero)
                offer(theta_du, StopKind::derivative_crossed_zero);
        }

        bool stopping = theta_stop <= 1.0;
        double theta_end = stopping ? theta_stop : 1.0;

        if (theta_du < theta_end && !ctl.stop_on_derivative_zero)
            prof.du_zero_radii.push_back(phys_at(theta_du).r);

        while (next_xs < xs.size() &&
               dir * (xs[next_xs] - (x + theta_end * h)) < 0.0) {
            double th = (xs[next_xs] - x) / h;
            append(M.phys(xs[next_xs], dn.at(th)));
            ++next_xs;
        }

        if (stopping) {
            Phys phs = phys_at(theta_stop);
            if (kind_stop != StopKind::solution_crossed_zero) append(phs);
            return finish(kind_stop, x + theta_stop * h, "");
        }

        append(ph1);
        x += h;
        y = ynew;
        k1 = k7;
        if (last) return finish(StopKind::reached_end, x1, "");

        double fac = 0.9 * std::pow(err > 0.0 ? err : 1e-16, -0.14) *
                     std::pow(errold, 0.08);
        fac = std::min(just_rejected ? 1.0 : 5.0, std::max(0.2, fac));
        h *= fac;
        errold = std::max(err, 1e-4);
        just_rejected = false;
    }
    throw NumericError("integration exceeded the step budget at r = " +
                       fmt_radius(M.phys(x, y).r));
}

ShootResult shoot(const OdeProblem& prob, double u0, double lo, double hi,
                  double target, const OdeControls& ctl) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("shoot requires a finite bracket with lo < hi");
    if (!std::isfinite(target)) throw DomainError("shoot requires a finite target");

    // floor at a fraction of the start value so a zero target stays reachable
    const double scale = std::max({std::abs(target), 1e-3 * std::abs(u0), 1e-300});
    const double tol = 1e-9 * scale;
    const bool downward = target < u0;

    auto mismatch = [&](double s) -> std::pair<double, ShootOutcome> {
        ShootOutcome oc = integrate(prob, u0, s, ctl);
        double m = 0.0;
        switch (oc.kind) {
            case StopKind::reached_end:
                m = oc.profile.u.back() - target;
                break;
            case StopKind::gradient_blowup:
                m = kHuge;
                break;
            case StopKind::value_exceeded_cap:
                m = (oc.profile.u.empty() || oc.profile.u.back() >= 0.0) ? kHuge
                                                                         : -kHuge;
                break;
            case StopKind::derivative_crossed_zero:
                m = downward ? kHuge : -kHuge;
                break;
            default:  // vanished or crossed zero: fell short
                m = -kHuge;
                break;
        }
        return {m, std::move(oc)};
    };

    auto [m_lo, oc_lo] = mismatch(lo);
    if (std::abs(m_lo) <= tol) return {lo, std::move(oc_lo)};
    auto [m_hi, oc_hi] = mismatch(hi);
    if (std::abs(m_hi) <= tol) return {hi, std::move(oc_hi)};
    if ((m_lo < 0.0) == (m_hi < 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "shoot bracket does not straddle the target: mismatch(" << lo
           << ") = " << m_lo << ", mismatch(" << hi << ") = " << m_hi;
        throw BracketError(os.str());
    }

    if (lo < 0.0 && hi > 0.0) {
        auto [m0, oc0] = mismatch(0.0);
        if (std::abs(m0) <= tol) return {0.0, std::move(oc0)};
        if ((m0 < 0.0) == (m_lo < 0.0)) {
            lo = 0.0;
            m_lo = m0;
        } else {
            hi = 0.0;
            m_hi = m0;
        }
    }

    double a = lo, b = hi, ma = m_lo, mb = m_hi;
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 400; ++it) {
        double w = b - a;
        double s = a + 0.5 * w;
        if (std::abs(ma) < kHuge && std::abs(mb) < kHuge && mb != ma) {
            double sec = a - ma * w / (mb - ma);
            if (sec > a + 0.1 * w && sec < b - 0.1 * w) s = sec;
        }
        auto [m, oc] = mismatch(s);
        best = std::min(best, std::abs(m));
        if (std::abs(m) <= tol) return {s, std::move(oc)};
        if ((m < 0.0) == (ma < 0.0)) {
            a = s;
            ma = m;
        } else {
            b = s;
            mb = m;
        }
        if (b - a <= 4e-16 * std::max({std::abs(a), std::abs(b), 1e-30})) break;
    }
    std::ostringstream os;
    os.precision(17);
    os << "shoot stagnated: best |mismatch| = " << best << ", tolerance = " << tol;
    throw NumericError(os.str());
}

MonitorTrace monitor(const RadialProfile& prof, MonitorKind kind, double eps) {
    if (!std::isfinite(eps)) throw DomainError("monitor requires finite epsilon");
    const Params& P = prof.problem.params;
    MonitorTrace tr;
    tr.kind = kind;
    tr.epsilon = eps;
    tr.values.reserve(prof.r.size());
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        double u = prof.u[i];
        double du = prof.du[i];
        double v = 0.0;
        if (kind == MonitorKind::energy_E) {
            v = 0.5 * du * du + std::pow(std::abs(u), P.p + 1.0) / (P.p + 1.0);
        } else {
            v = sign_pow(u, P.p) - (1.0 + eps) * P.m * std::pow(std::abs(du), P.q);
        }
        tr.values.push_back(v);
    }
    for (std::size_t i = 0; i + 1 < tr.values.size(); ++i) {
        double va = tr.values[i];
        double vb = tr.values[i + 1];
        if (va * vb < 0.0) {
            double t = va / (va - vb);
            tr.sign_change_radii.push_back(prof.r[i] +
                                           t * (prof.r[i + 1] - prof.r[i]));
        }
    }
    return tr;
}

}  // namespace radlab
