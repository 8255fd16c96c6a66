#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "radlab/closed_forms.hpp"
#include "radlab/quadrature.hpp"

using namespace radlab;

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

// central difference of a scalar function
template <class F>
double fd(const F& f, double r, double h) {
    return (f(r + h) - f(r - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("spec validation and branch direction") {
    Params P(3, 2.0, 3.0, 1.0);
    CHECK(direction_of(QuadratureSpec(P, 1.0, 0.5)) == Direction::increasing);
    CHECK(direction_of(QuadratureSpec(P, 1.0, -0.5)) == Direction::decreasing);
    CHECK(direction_of(QuadratureSpec(P, 1.0, 0.0)) == Direction::constant);

    CHECK_THROWS_AS(QuadratureSpec(Params(3, 2.0, 3.0, 0.0), 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(QuadratureSpec(P, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(QuadratureSpec(P, 1.0, 1.0 / 0.0), DomainError);
}

TEST_CASE("slope satisfies its own differential equation") {
    // v'' = -(N-1)v'/r + m|v'|^q, checked by central differences of the
    // closed-form slope on both branches and in the logarithmic case
    auto check = [](const QuadratureSpec& spec, std::initializer_list<double> radii) {
        const Params& P = spec.params;
        for (double r : radii) {
            double h = 1e-5 * r;
            double dz = fd([&](double s) { return riccati_slope(spec, s); }, r, h);
            double z = riccati_slope(spec, r);
            double rhs = -(P.N - 1) * z / r + P.m * std::pow(std::abs(z), P.q);
            CHECK(rel_diff(dz, rhs) < 1e-6);
        }
    };
    check(QuadratureSpec(Params(3, 2.0, 3.0, 1.0), 1.0, std::sqrt(12.0 / 7.0)),
          {1.2, 1.5, 1.8});
    check(QuadratureSpec(Params(3, 2.0, 1.5, 1.0), 1.0, 2.0), {1.1, 1.3});  // q = N/(N-1)
    check(QuadratureSpec(Params(3, 2.0, 2.5, 0.5), 2.0, -3.0), {2.5, 4.0, 6.0});
    check(QuadratureSpec(Params(3, 2.0, 1.2, 0.7), 0.5, 1.0), {0.6, 0.8});
}

TEST_CASE("slope at the left endpoint is the prescribed one") {
    for (double X : {0.3, 5.0, -0.3, -5.0}) {
        QuadratureSpec spec(Params(4, 2.0, 2.2, 1.3), 1.7, X);
        CHECK(rel_diff(riccati_slope(spec, 1.7), X) < 1e-13);
    }
}

TEST_CASE("increasing branch: frozen values and blow-up cap") {
    // N=3, q=3, m=1, r0=1, slope chosen so the gradient blows up exactly at 2
    Params P(3, 2.0, 3.0, 1.0);
    double X = increasing_X_with_blowup_at(P, 1.0, 2.0);
    CHECK(rel_diff(X, std::sqrt(12.0 / 7.0)) < 1e-13);

    QuadratureSpec spec(P, 1.0, X);
    CHECK(riccati_increasing_map(spec, 1.0) == 0.0);
    CHECK(rel_diff(riccati_increasing_map(spec, 1.5), 0.6384728150936911) < 1e-9);

    BlowupReport rep = blowup_report(spec);
    CHECK(rep.kind == BlowupKind::finite_radius_gradient_blowup);
    REQUIRE(rep.radius.has_value());
    CHECK(rel_diff(*rep.radius, 2.0) < 1e-12);
    REQUIRE(rep.C2.has_value());
    CHECK(rel_diff(*rep.C2, 1.7339962078010737) < 1e-9);

    // the map climbs monotonically to C2 and stays strictly below it
    double t1 = riccati_increasing_map(spec, 1.9);
    double t2 = riccati_increasing_map(spec, 1.999);
    double t3 = riccati_increasing_map(spec, 2.0 * (1.0 - 1e-10));
    CHECK(t1 < t2);
    CHECK(t2 < t3);
    CHECK(t3 < *rep.C2);
    CHECK(rel_diff(t3, *rep.C2) < 5e-5);

    CHECK_THROWS_AS(riccati_increasing_map(spec, 2.5), DomainError);
    CHECK_THROWS_AS(riccati_increasing_map(spec, 0.5), DomainError);
}

TEST_CASE("increasing map follows its slope") {
    QuadratureSpec spec(Params(3, 2.0, 3.0, 1.0), 1.0, std::sqrt(12.0 / 7.0));
    for (double r : {1.2, 1.5, 1.8}) {
        double d = fd([&](double s) { return riccati_increasing_map(spec, s); }, r, 1e-5);
        CHECK(rel_diff(d, riccati_slope(spec, r)) < 1e-7);
    }
}

TEST_CASE("blow-up radius round-trips across all cases") {
    struct Case {
        Params P;
        double r0, tau;
    };
    const Case cases[] = {
        {Params(3, 2.0, 1.2, 0.7), 0.5, 3.0},   // exponent above zero
        {Params(3, 2.0, 1.5, 1.0), 1.0, 2.0},   // logarithmic tie q = N/(N-1)
        {Params(3, 2.0, 3.0, 1.0), 1.0, 2.0},   // exponent below zero, q > 2
        {Params(4, 2.0, 2.0, 2.0), 1.5, 4.0},   // exponent below zero, q = 2
    };
    for (const Case& c : cases) {
        double X = increasing_X_with_blowup_at(c.P, c.r0, c.tau);
        BlowupReport rep = blowup_report(QuadratureSpec(c.P, c.r0, X));
        CHECK(rep.kind == BlowupKind::finite_radius_gradient_blowup);
        REQUIRE(rep.radius.has_value());
        CHECK(rel_diff(*rep.radius, c.tau) < 1e-10);
    }

    // q = 2 case carries no finite total increase
    double X4 = increasing_X_with_blowup_at(Params(4, 2.0, 2.0, 2.0), 1.5, 4.0);
    CHECK(!blowup_report(QuadratureSpec(Params(4, 2.0, 2.0, 2.0), 1.5, X4)).C2.has_value());

    // below the removability exponent every positive slope blows up
    BlowupReport tiny = blowup_report(QuadratureSpec(Params(3, 2.0, 1.2, 0.7), 0.5, 1e-6));
    CHECK(tiny.kind == BlowupKind::finite_radius_gradient_blowup);
    CHECK(std::isfinite(*tiny.radius));
}

TEST_CASE("steep approach when the blow-up is not integrable") {
    // q < 2: the increase diverges at the blow-up radius like (rt - r)^{1-1/(q-1)}
    Params P(3, 2.0, 1.2, 0.7);
    double X = increasing_X_with_blowup_at(P, 0.5, 3.0);
    QuadratureSpec spec(P, 0.5, X);
    double near = riccati_increasing_map(spec, 3.0 * (1.0 - 1e-4));
    double far = riccati_increasing_map(spec, 3.0 * (1.0 - 1e-2));
    CHECK(near / far > 1e6);  // (q-1)^{-1} - 1 = 4, so the ratio scales like 1e8
}

TEST_CASE("threshold slope separates global from blow-up") {
    // N=3, q=2, m=2, r0=1/2: threshold slope is exactly 1
    Params P(3, 2.0, 2.0, 2.0);
    const double r0 = 0.5;

    BlowupReport at = blowup_report(QuadratureSpec(P, r0, 1.0));
    CHECK(at.kind == BlowupKind::threshold);
    REQUIRE(at.X0.has_value());
    CHECK(rel_diff(*at.X0, 1.0) < 1e-13);
    CHECK(!at.radius.has_value());
    CHECK(!at.C1.has_value());

    BlowupReport above = blowup_report(QuadratureSpec(P, r0, 1.001));
    CHECK(above.kind == BlowupKind::finite_radius_gradient_blowup);

    // blow-up radius runs away as the slope falls to the threshold
    double r_far = *blowup_report(QuadratureSpec(P, r0, 1.0001)).radius;
    double r_mid = *blowup_report(QuadratureSpec(P, r0, 1.01)).radius;
    double r_near = *blowup_report(QuadratureSpec(P, r0, 2.0)).radius;
    CHECK(r_far > r_mid);
    CHECK(r_mid > r_near);

    BlowupReport below = blowup_report(QuadratureSpec(P, r0, 0.5));
    CHECK(below.kind == BlowupKind::global);
    REQUIRE(below.C1.has_value());
    CHECK(rel_diff(*below.C1, 0.5) < 1e-13);

    // the global branch really is global, with total increase (ln 2)/2 here,
    // and C1 is a strict upper bound for it
    QuadratureSpec glob(P, r0, 0.5);
    double total = riccati_increasing_map(glob, 1e8);
    CHECK(rel_diff(total, 0.5 * std::log(2.0)) < 1e-7);
    CHECK(total < *below.C1);
}

TEST_CASE("decreasing branch bookkeeping") {
    Params P(3, 2.0, 2.5, 0.5);
    QuadratureSpec spec(P, 2.0, -3.0);
    const double gap = 1.0;
    CHECK(riccati_decreasing_map(spec, 2.0, gap) == gap);

    double s1 = riccati_decreasing_map(spec, 3.0, gap);
    double s2 = riccati_decreasing_map(spec, 5.0, gap);
    double s3 = riccati_decreasing_map(spec, 9.0, gap);
    CHECK(s1 < gap);
    CHECK(s2 < s1);
    CHECK(s3 < s2);

    // remaining drop falls at the rate of the (negative) slope
    for (double r : {2.5, 4.0}) {
        double d = fd([&](double s) { return riccati_decreasing_map(spec, s, gap); }, r, 1e-5);
        CHECK(rel_diff(d, riccati_slope(spec, r)) < 1e-7);
    }

    CHECK_THROWS_AS(riccati_decreasing_map(QuadratureSpec(P, 2.0, 3.0), 2.5, gap),
                    DomainError);
    CHECK_THROWS_AS(riccati_decreasing_map(spec, 2.5, -1.0), DomainError);
    CHECK_THROWS_AS(riccati_decreasing_map(spec, 1.0, gap), DomainError);
}

TEST_CASE("largest achievable drop: frozen values and scaling") {
    double th = theta_cap(Params(3, 2.0, 3.0, 1.0), 1.0, 2.0);
    CHECK(rel_diff(th, 1.0948211595573875) < 1e-9);

    // doubling r0 and tau together scales the cap by 2^{(q-2)/(q-1)} = sqrt(2)
    double th2 = theta_cap(Params(3, 2.0, 3.0, 1.0), 2.0, 4.0);
    CHECK(rel_diff(th2, 1.5483109322190957) < 1e-9);
    CHECK(rel_diff(th2 / th, std::sqrt(2.0)) < 1e-9);

    double thinf = theta_cap(Params(3, 2.0, 3.0, 1.0),
                             1.0, std::numeric_limits<double>::infinity());
    CHECK(rel_diff(thinf, 1.7173153422544110) < 1e-9);

    CHECK(rel_diff(theta_cap(Params(3, 2.0, 2.5, 0.5), 2.0, 7.0), 4.3905331946772266)
          < 1e-9);

    // monotone in tau, infinite for the plane
    double ta = theta_cap(Params(3, 2.0, 3.0, 1.0), 1.0, 3.0);
    CHECK(th < ta);
    CHECK(ta < thinf);
    CHECK(std::isinf(theta_cap(Params(2, 2.0, 3.0, 1.0),
                               1.0, std::numeric_limits<double>::infinity())));

    CHECK_THROWS_AS(theta_cap(Params(3, 2.0, 2.0, 1.0), 1.0, 2.0), DomainError);
    CHECK_THROWS_AS(theta_cap(Params(3, 2.0, 3.0, 1.0), 2.0, 2.0), DomainError);
}

TEST_CASE("steep decreasing slopes saturate the drop cap") {
    // as the initial slope steepens the total drop over [r0, tau] approaches
    // the cap from below
    Params P(3, 2.0, 3.0, 1.0);
    double th = theta_cap(P, 1.0, 2.0);
    double drop_steep = 1.0 - riccati_decreasing_map(QuadratureSpec(P, 1.0, -1e150), 2.0, 1.0);
    double drop_mild = 1.0 - riccati_decreasing_map(QuadratureSpec(P, 1.0, -10.0), 2.0, 1.0);
    CHECK(drop_mild < drop_steep);
    CHECK(drop_steep < th * (1.0 + 1e-9));
    CHECK(rel_diff(drop_steep, th) < 1e-9);
}

TEST_CASE("slope scaling covariance") {
    // rescaling r0 -> r0/l and X -> l^{beta+1} X sends the slope at r/l to
    // l^{beta+1} times the slope at r
    const double l = 2.0;
    for (double X : {0.7, -0.7}) {
        Params P(3, 2.0, 2.5, 0.5);
        const double beta = (2.0 - P.q) / (P.q - 1.0);
        QuadratureSpec base(P, 2.0, X);
        QuadratureSpec scaled(P, 2.0 / l, std::pow(l, beta + 1.0) * X);
        for (double r : {2.2, 3.0}) {
            double lhs = riccati_slope(scaled, r / l);
            double rhs = std::pow(l, beta + 1.0) * riccati_slope(base, r);
            CHECK(rel_diff(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("logarithmic tie is the limit of its neighbors") {
    const double qc = 1.5;  // N/(N-1) for N=3
    double X = 2.0;
    double rt_tie = *blowup_report(QuadratureSpec(Params(3, 2.0, qc, 1.0), 1.0, X)).radius;
    for (double q : {qc * (1.0 - 1e-9), qc * (1.0 + 1e-9)}) {
        double rt = *blowup_report(QuadratureSpec(Params(3, 2.0, q, 1.0), 1.0, X)).radius;
        CHECK(rel_diff(rt, rt_tie) < 1e-6);
    }
}

TEST_CASE("fundamental normalization constant") {
    CHECK(rel_diff(default_cN(3), 0.07957747154594767) < 1e-14);   // 1/(4 pi)
    CHECK(rel_diff(default_cN(4), 0.025330295910584444) < 1e-14);  // 1/(4 pi^2)
    CHECK_THROWS_AS(default_cN(2), DomainError);
}

TEST_CASE("singular profile: exact power branch at infinite mass") {
    Params P(3, 2.0, 1.4, 1.0);
    SingularRiccati sr(P, std::numeric_limits<double>::infinity());
    const double beta = 1.5;
    const double xi = riccati_constant(P);
    for (double r : {1e-4, 1.0, 100.0}) {
        ProfilePoint pt = singular_riccati_profile(sr, r);
        CHECK(rel_diff(pt.u, xi * std::pow(r, -beta)) < 1e-14);
        CHECK(rel_diff(pt.du, -beta * xi * std::pow(r, -beta - 1.0)) < 1e-14);
        CHECK(rel_diff(pt.d2u, beta * (beta + 1.0) * xi * std::pow(r, -beta - 2.0)) < 1e-14);
    }
}

TEST_CASE("singular profile: solves the gradient-only equation") {
    // residual of -u'' - (N-1)u'/r + m|u'|^q with the analytic derivatives,
    // plus finite-difference consistency of those derivatives
    Params P(3, 2.0, 1.4, 1.0);
    for (double k : {1.0, std::numeric_limits<double>::infinity()}) {
        SingularRiccati sr(P, k);
        for (int i = 0; i < 20; ++i) {
            double r = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
            ProfilePoint pt = singular_riccati_profile(sr, r);
            double res = -pt.d2u - (P.N - 1) * pt.du / r +
                         P.m * std::pow(std::abs(pt.du), P.q);
            double scale = std::abs(pt.d2u) + std::abs((P.N - 1) * pt.du / r) +
                           P.m * std::pow(std::abs(pt.du), P.q);
            CHECK(std::abs(res) < 1e-12 * scale);
        }
    }

    SingularRiccati sr(P, 1.0);
    for (double r : {0.5, 2.0}) {
        double h = 1e-3 * r;
        auto u_at = [&](double s) { return singular_riccati_profile(sr, s).u; };
        auto du_at = [&](double s) { return singular_riccati_profile(sr, s).du; };
        ProfilePoint pt = singular_riccati_profile(sr, r);
        CHECK(rel_diff(fd(u_at, r, h), pt.du) < 1e-4);
        CHECK(rel_diff(fd(du_at, r, h), pt.d2u) < 1e-4);
    }
}

TEST_CASE("singular profile: near-origin mass normalization") {
    // r^{N-2} u -> cN k at the origin
    Params P(3, 2.0, 1.1, 1.0);
    const double cN = default_cN(3);
    for (double k : {0.1, 1.0}) {
        SingularRiccati sr(P, k);
        double u6 = singular_riccati_profile(sr, 1e-6).u;
        CHECK(std::abs(1e-6 * u6 / (cN * k) - 1.0) < 1e-4);
        double u8 = singular_riccati_profile(sr, 1e-8).u;
        CHECK(std::abs(1e-8 * u8 / (cN * k) - 1.0) < 3e-6);
    }
}

TEST_CASE("singular profile: far field forgets the mass") {
    // r^beta u -> xi_m regardless of k
    Params P(3, 2.0, 1.1, 10.0);
    const double beta = 9.0;
    const double xi = riccati_constant(P);
    double prev = 0.0;
    for (double k : {0.01, 1.0, 100.0}) {
        double u = singular_riccati_profile(SingularRiccati(P, k), 1e6).u;
        CHECK(std::abs(std::pow(1e6, beta) * u / xi - 1.0) < 3e-4);
        CHECK(u > prev);  // more mass, larger profile
        prev = u;
    }
}

TEST_CASE("singular profile: domain gates") {
    CHECK_THROWS_AS(SingularRiccati(Params(2, 2.0, 1.4, 1.0), 1.0), DomainError);
    CHECK_THROWS_AS(SingularRiccati(Params(3, 2.0, 1.5, 1.0), 1.0), DomainError);
    CHECK_THROWS_AS(SingularRiccati(Params(3, 2.0, 1.4, 0.0), 1.0), DomainError);
    CHECK_THROWS_AS(SingularRiccati(Params(3, 2.0, 1.4, 1.0), 0.0), DomainError);
    CHECK_THROWS_AS(SingularRiccati(Params(3, 2.0, 1.4, 1.0), 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(
        singular_riccati_profile(SingularRiccati(Params(3, 2.0, 1.4, 1.0), 1.0), 0.0),
        DomainError);
}
