#include "radlab/closed_forms.hpp"

#include <cmath>
#include <limits>

#include "radlab/quadrature.hpp"

namespace radlab {

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kTieRelTol = 1e-12;

struct Reduction {
    double e;        // N - q(N-1); zero means the logarithmic case q = N/(N-1)
    double a;        // 1/(q-1)
    double mq1;      // m(q-1)
    bool log_case;
    double r0;
    int N;

    // antiderivative of s^{e-1} from r0 to r (the first-integral kernel)
    double I(double r) const {
        if (log_case) return std::log(r / r0);
        return (std::pow(r, e) - std::pow(r0, e)) / e;
    }

    // I(rt) - I(rt - u), stable down to u near machine precision
    double I_diff(double rt, double u) const {
        double x = u / rt;
        if (log_case) return -std::log1p(-x);
        return -std::pow(rt, e) * std::expm1(e * std::log1p(-x)) / e;
    }

    // I(r0 + u), stable for u << r0
    double I_lo(double u) const {
        double x = u / r0;
        if (log_case) return std::log1p(x);
        return std::pow(r0, e) * std::expm1(e * std::log1p(x)) / e;
    }
};

Reduction reduce(const Params& P, double r0) {
    Reduction R;
    R.N = P.N;
    R.r0 = r0;
    R.a = 1.0 / (P.q - 1.0);
    R.mq1 = P.m * (P.q - 1.0);
    const double qc = double(P.N) / (P.N - 1);
    R.log_case = P.N >= 2 && std::abs(P.q - qc) <= kTieRelTol * std::max(1.0, qc);
    R.e = R.log_case ? 0.0 : double(P.N) - P.q * (P.N - 1);
    return R;
}

void require(bool ok, const char* condition) {
    if (!ok) throw DomainError(condition);
}

}  // namespace

QuadratureSpec::QuadratureSpec(const Params& P, double r0_, double X_)
    : params(P), r0(r0_), X(X_) {
    require(P.m > 0.0, "QuadratureSpec requires m > 0");
    require(r0 > 0.0, "QuadratureSpec requires r0 > 0");
    require(std::isfinite(X), "QuadratureSpec requires finite X");
}

Direction direction_of(const QuadratureSpec& spec) {
    if (spec.X > 0.0) return Direction::increasing;
    if (spec.X < 0.0) return Direction::decreasing;
    return Direction::constant;
}

double default_cN(int N) {
    require(N >= 3, "default_cN requires N >= 3");
    const double pi = 3.14159265358979323846;
    double sphere = 2.0 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
    return 1.0 / ((N - 2) * sphere);
}

namespace {

// slope of the increasing branch: v'(r) = r^{1-N} (A - m(q-1) I(r))^{-a}
double increasing_bracket(const Reduction& R, double A, double r) {
    return A - R.mq1 * R.I(r);
}

double blowup_radius_from_A(const Reduction& R, double A) {
    // solves A = m(q-1) I(r); no solution (returns +inf) when I is bounded
    // above by A/m(q-1), which happens only for e < 0 with small A
    const double target = A / R.mq1;
    if (R.log_case) return R.r0 * std::exp(target);
    double base = R.e * target + std::pow(R.r0, R.e);
    if (R.e < 0.0 && base <= 0.0) return kInf;
    return std::pow(base, 1.0 / R.e);
}

// integral of the slope r^{1-N} (A - m(q-1) I)^{-a} from `from` up to the
// blow-up radius itself, finite only for q > 2. Anchoring the bracket at
// rtilde (m(q-1)(I(rtilde) - I(s)), evaluated through I_diff) keeps the
// integrand accurate arbitrarily close to the endpoint.
double increase_up_to_blowup(const Reduction& R, double rtilde, double from,
                             const char* what) {
    Integrand fd = [&R, rtilde](double u) {
        return std::pow(rtilde - u, 1 - R.N) * std::pow(R.mq1 * R.I_diff(rtilde, u), -R.a);
    };
    return integrate_singular_origin(fd, rtilde - from, R.a, what);
}

}  // namespace

double increasing_X_with_blowup_at(const Params& P, double r0, double tau) {
    require(P.m > 0.0, "increasing_X_with_blowup_at requires m > 0");
    require(tau > r0 && r0 > 0.0, "increasing_X_with_blowup_at requires tau > r0 > 0");
    Reduction R = reduce(P, r0);
    double A = R.mq1 * R.I(tau);
    return std::pow(r0, 1 - P.N) * std::pow(A, -R.a);
}

BlowupReport blowup_report(const QuadratureSpec& spec) {
    const Params& P = spec.params;
    Reduction R = reduce(P, spec.r0);
    BlowupReport out;
    if (spec.X <= 0.0) {  // constant and decreasing branches never blow up
        out.kind = BlowupKind::global;
        return out;
    }
    const double A = std::pow(std::pow(spec.r0, P.N - 1) * spec.X, -(1.0 / R.a));
    if (R.log_case || R.e > 0.0) {
        out.kind = BlowupKind::finite_radius_gradient_blowup;
        out.radius = blowup_radius_from_A(R, A);
        return out;
    }

    // case q > N/(N-1): threshold slope X0 separates global from blow-up
    const double X0 =
        std::pow(-R.e / (R.mq1 * spec.r0), R.a);  // -e = q(N-1) - N > 0
    out.X0 = X0;
    double rel = (spec.X - X0) / X0;
    if (std::abs(rel) <= kTieRelTol) {
        out.kind = BlowupKind::threshold;
        return out;
    }
    if (spec.X < X0) {
        out.kind = BlowupKind::global;
        if (P.N >= 3) {
            double ratio = std::pow(spec.X / X0, P.q - 1.0);
            out.C1 = spec.r0 * spec.X / (P.N - 2) * std::pow(1.0 - ratio, -R.a);
        }
        return out;
    }
    out.kind = BlowupKind::finite_radius_gradient_blowup;
    double rtilde = blowup_radius_from_A(R, A);
    out.radius = rtilde;
    if (P.q > 2.0) {
        // total increase up to the blow-up radius stays finite: the endpoint
        // singularity (rtilde - s)^{-1/(q-1)} is integrable
        out.C2 = increase_up_to_blowup(R, rtilde, spec.r0,
                                       "riccati increase up to blow-up");
    }
    return out;
}

double riccati_increasing_map(const QuadratureSpec& spec, double r) {
    const Params& P = spec.params;
    require(spec.X > 0.0, "riccati_increasing_map requires X > 0");
    require(r >= spec.r0, "riccati_increasing_map requires r >= r0");
    if (r == spec.r0) return 0.0;
    Reduction R = reduce(P, spec.r0);
    const double A = std::pow(std::pow(spec.r0, P.N - 1) * spec.X, -(1.0 / R.a));
    double rblow = blowup_radius_from_A(R, A);
    require(r < rblow, "riccati_increasing_map requires r below the gradient blow-up radius");
    // near the blow-up radius the integrand is steep; when it is integrable
    // past r the tail-difference form is better conditioned
    if (P.q > 2.0 && std::isfinite(rblow) && (rblow - r) < 1e-3 * (rblow - spec.r0)) {
        double whole = increase_up_to_blowup(R, rblow, spec.r0, "riccati increasing map");
        double tail = increase_up_to_blowup(R, rblow, r, "riccati increasing map");
        return whole - tail;
    }
    Integrand f = [&R, A](double s) {
        return std::pow(s, 1 - R.N) * std::pow(increasing_bracket(R, A, s), -R.a);
    };
    return integrate_or_throw(f, spec.r0, r, "riccati increasing map");
}

double riccati_decreasing_map(const QuadratureSpec& spec, double r, double gap) {
    const Params& P = spec.params;
    require(spec.X < 0.0, "riccati_decreasing_map requires X < 0");
    require(gap > 0.0, "riccati_decreasing_map requires gap > 0");
    require(r >= spec.r0, "riccati_decreasing_map requires r >= r0");
    if (r == spec.r0) return gap;
    Reduction R = reduce(P, spec.r0);
    const double A = std::pow(std::pow(spec.r0, P.N - 1) * (-spec.X), -(1.0 / R.a));
    double drop;
    if (R.a < 1.0) {
        // steep slopes make A tiny and pile the drop against r0; the distance
        // form stays accurate there (and is harmlessly cautious otherwise)
        Integrand fd = [&R, A, r0 = spec.r0](double u) {
            return std::pow(r0 + u, 1 - R.N) * std::pow(A + R.mq1 * R.I_lo(u), -R.a);
        };
        drop = integrate_singular_origin(fd, r - spec.r0, R.a, "riccati decreasing map");
    } else {
        Integrand f = [&R, A](double s) {
            return std::pow(s, 1 - R.N) * std::pow(A + R.mq1 * R.I(s), -R.a);
        };
        drop = integrate_or_throw(f, spec.r0, r, "riccati decreasing map");
    }
    return gap - drop;
}

double riccati_slope(const QuadratureSpec& spec, double r) {
    const Params& P = spec.params;
    require(r >= spec.r0, "riccati_slope requires r >= r0");
    if (spec.X == 0.0) return 0.0;
    Reduction R = reduce(P, spec.r0);
    const double A = std::pow(std::pow(spec.r0, P.N - 1) * std::abs(spec.X), -(1.0 / R.a));
    if (spec.X > 0.0) {
        double br = increasing_bracket(R, A, r);
        require(br > 0.0, "riccati_slope requires r below the gradient blow-up radius");
        return std::pow(r, 1 - P.N) * std::pow(br, -R.a);
    }
    return -std::pow(r, 1 - P.N) * std::pow(A + R.mq1 * R.I(r), -R.a);
}

double theta_cap(const Params& P, double r0, double tau) {
    require(P.q > 2.0, "theta_cap requires q > 2");
    require(P.m > 0.0, "theta_cap requires m > 0");
    require(r0 > 0.0, "theta_cap requires r0 > 0");
    require(tau > r0, "theta_cap requires tau > r0");
    const double a = 1.0 / (P.q - 1.0);
    const double eneg = P.q * (P.N - 1) - P.N;  // = -e > 0 since q > 2 >= N/(N-1)
    const double K = std::pow(eneg / (P.m * (P.q - 1.0)), a);
    const double scale = K * std::pow(r0, (P.q - 2.0) / (P.q - 1.0));
    Integrand g = [&](double t) {
        return std::pow(t, 1 - P.N) * std::pow(1.0 - std::pow(t, -eneg), -a);
    };
    // distance form of g at t = 1 + u: 1 - t^{-eneg} = -expm1(-eneg log1p(u))
    Integrand gd = [&](double u) {
        double core = -std::expm1(-eneg * std::log1p(u));
        return std::pow(1.0 + u, 1 - P.N) * std::pow(core, -a);
    };
    const double T = tau / r0;
    if (std::isinf(T)) {
        if (P.N < 3) return kInf;  // the tail integral t^{1-N} diverges
        double head = integrate_singular_origin(gd, 1.0, a, "theta cap");
        double tail = integrate_to_infinity(g, 2.0, "theta cap");
        return scale * (head + tail);
    }
    double Tsplit = std::min(2.0, T);
    double value = integrate_singular_origin(gd, Tsplit - 1.0, a, "theta cap");
    if (T > Tsplit) value += integrate_or_throw(g, Tsplit, T, "theta cap");
    return scale * value;
}

SingularRiccati::SingularRiccati(const Params& P, double k_, double cN_)
    : params(P), k(k_), cN(cN_) {
    require(P.N >= 3, "SingularRiccati requires N >= 3");
    require(P.q < double(P.N) / (P.N - 1) * (1.0 - kTieRelTol),
            "SingularRiccati requires q < N/(N-1)");
    require(P.m > 0.0, "SingularRiccati requires m > 0");
    require(k > 0.0, "SingularRiccati requires k > 0");
    require(cN > 0.0, "SingularRiccati requires cN > 0");
}

SingularRiccati::SingularRiccati(const Params& P, double k_)
    : SingularRiccati(P, k_, default_cN(P.N)) {}

ProfilePoint singular_riccati_profile(const SingularRiccati& sr, double r) {
    const Params& P = sr.params;
    require(r > 0.0, "singular_riccati_profile requires r > 0");
    const double a = 1.0 / (P.q - 1.0);
    const double e = double(P.N) - P.q * (P.N - 1);  // > 0 in the validity regime
    ProfilePoint out;
    if (std::isinf(sr.k)) {  // A = 0: exact power profile xi_m r^{-beta}
        const double beta = (2.0 - P.q) / (P.q - 1.0);
        const double xi = riccati_constant(P);
        out.u = xi * std::pow(r, -beta);
        out.du = -beta * xi * std::pow(r, -beta - 1.0);
        out.d2u = beta * (beta + 1.0) * xi * std::pow(r, -beta - 2.0);
        return out;
    }
    const double A = std::pow((P.N - 2) * sr.cN * sr.k, 1.0 - P.q);
    const double ce = P.m * (P.q - 1.0) / e;
    Integrand f = [&](double s) {
        return std::pow(s, 1 - P.N) * std::pow(ce * std::pow(s, e) + A, -a);
    };
    out.u = integrate_to_infinity(f, r, "singular riccati profile");
    const double B = ce * std::pow(r, e) + A;
    out.du = -std::pow(r, 1 - P.N) * std::pow(B, -a);
    out.d2u = (P.N - 1) * std::pow(r, -P.N) * std::pow(B, -a) +
              a * P.m * (P.q - 1.0) * std::pow(r, e - P.N) * std::pow(B, -a - 1.0);
    return out;
}

}  // namespace radlab
