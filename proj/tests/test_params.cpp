#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "radlab/params.hpp"
#include "test_rng.hpp"

using namespace radlab;

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(Params(3, 2.0, 1.5, 0.0));
    CHECK_THROWS_AS(Params(0, 2.0, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(Params(3, -1.0, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(Params(3, 2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Params(3, 2.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(Params(3, 2.0, 1.5, -2.0), DomainError);
}

TEST_CASE("exponents: closed forms") {
    ExponentSet E = compute_exponents(Params(3, 4.0, 1.4, 1.0));
    CHECK(rel_diff(E.alpha, 2.0 / 3.0) < 1e-15);
    CHECK(rel_diff(E.beta, 1.5) < 1e-15);
    REQUIRE(E.gamma.has_value());
    CHECK(rel_diff(*E.gamma, 1.4 / 2.6) < 1e-15);
    CHECK(rel_diff(E.sigma, -1.0) < 1e-15);

    // p = q leaves gamma undefined
    CHECK(!compute_exponents(Params(3, 2.0, 2.0, 1.0)).gamma.has_value());

    // p = 1 breaks alpha
    CHECK_THROWS_AS(compute_exponents(Params(3, 1.0, 1.4, 1.0)), DomainError);
}

TEST_CASE("exponents: algebraic identities over random draws") {
    Rng rng{20260822u};
    for (int i = 0; i < 1000; ++i) {
        double p = rng.uniform(1.0 + 1e-6, 10.0);
        double q = rng.uniform(1.0 + 1e-6, 10.0);
        ExponentSet E = compute_exponents(Params(3, p, q, 1.0));
        CHECK(std::abs((E.beta + 1.0) * q - (E.beta + 2.0)) < 1e-12 * (E.beta + 2.0 + 1.0));
        if (E.gamma)
            CHECK(std::abs(*E.gamma * (p - q) - q) < 1e-12 * q);
    }
}

TEST_CASE("exponents: collapse on the critical line") {
    Rng rng{7u};
    for (int i = 0; i < 500; ++i) {
        double p = rng.uniform(1.01, 10.0);
        double q = 2.0 * p / (p + 1.0);
        ExponentSet E = compute_exponents(Params(3, p, q, 1.0));
        CHECK(std::abs(E.sigma) < 1e-9);
        CHECK(rel_diff(E.alpha, E.beta) < 1e-9);
        REQUIRE(E.gamma.has_value());
        CHECK(rel_diff(E.alpha, *E.gamma) < 1e-9);
    }
}

TEST_CASE("regime classification") {
    RegimeReport R = classify_regime(Params(3, 5.0, 1.5, 1.0));
    CHECK(R.q_vs_critical == Ternary::below);  // 2p/(p+1) = 5/3
    CHECK(R.q_vs_p == Ordering::less);
    REQUIRE(R.p_vs_serrin.has_value());
    CHECK(*R.p_vs_serrin == Ternary::above);  // N/(N-2) = 3
    REQUIRE(R.p_vs_sobolev.has_value());
    CHECK(*R.p_vs_sobolev == Ternary::at);  // (N+2)/(N-2) = 5
    CHECK(R.q_vs_removability == Ternary::at);  // N/(N-1) = 3/2
    CHECK(R.q_vs_two == Ternary::below);

    RegimeReport R2 = classify_regime(Params(4, 2.0, 1.2, 1.0));
    CHECK(R2.q_vs_critical == Ternary::below);  // 4/3
    CHECK(*R2.p_vs_serrin == Ternary::at);      // 2
    CHECK(*R2.p_vs_sobolev == Ternary::below);  // 3
    CHECK(R2.q_vs_removability == Ternary::below);

    // ties land exactly on "at"
    RegimeReport R3 = classify_regime(Params(3, 3.0, 1.5, 1.0));
    CHECK(R3.q_vs_critical == Ternary::at);
    CHECK(*R3.p_vs_serrin == Ternary::at);

    // plane: no critical Sobolev-type thresholds
    RegimeReport R4 = classify_regime(Params(2, 3.0, 1.5, 1.0));
    CHECK(!R4.p_vs_serrin.has_value());
    CHECK(!R4.p_vs_sobolev.has_value());
    CHECK(R4.q_vs_removability == Ternary::below);  // threshold 2
}

TEST_CASE("decay constant of the pure-source profile") {
    // N=3, p=4: alpha = 2/3, amplitude (2/9)^{1/3}
    double w = lane_emden_constant(Params(3, 4.0, 1.4, 1.0));
    CHECK(rel_diff(w, std::cbrt(2.0 / 9.0)) < 1e-14);

    // N=4, p=3: alpha = 1, amplitude exactly 1
    CHECK(rel_diff(lane_emden_constant(Params(4, 3.0, 1.4, 1.0)), 1.0) < 1e-14);

    // defining identity at sample radii: -Lap(w r^{-alpha}) == (w r^{-alpha})^p
    const double alpha = 2.0 / 3.0, p = 4.0;
    for (double r : {0.37, 1.0, 5.1}) {
        double lhs = w * alpha * (3.0 - 2.0 - alpha) * std::pow(r, -alpha - 2.0);
        double rhs = std::pow(w, p) * std::pow(r, -alpha * p);
        CHECK(rel_diff(lhs, rhs) < 1e-13);
    }

    CHECK_THROWS_AS(lane_emden_constant(Params(2, 4.0, 1.4, 1.0)), DomainError);
    CHECK_THROWS_AS(lane_emden_constant(Params(3, 3.0, 1.4, 1.0)), DomainError);  // p = N/(N-2)
    CHECK_THROWS_AS(lane_emden_constant(Params(3, 2.0, 1.4, 1.0)), DomainError);
}

TEST_CASE("decay constant of the pure-gradient profile") {
    double xi = riccati_constant(Params(3, 4.0, 1.4, 1.0));
    CHECK(rel_diff(xi, 0.11785113019775793) < 1e-14);

    // N=4, q=1.2, m=2: beta = 4, core = (4 - 3.6)/(2*0.2) = 1, value 1/4
    CHECK(rel_diff(riccati_constant(Params(4, 2.0, 1.2, 2.0)), 0.25) < 1e-14);

    // defining identity: m (xi beta)^{q-1} == (N - q(N-1))/(q-1)
    const double beta = 1.5, q = 1.4, m = 1.0;
    double lhs = m * std::pow(xi * beta, q - 1.0);
    double rhs = (3.0 - q * 2.0) / (q - 1.0);
    CHECK(rel_diff(lhs, rhs) < 1e-13);

    CHECK_THROWS_AS(riccati_constant(Params(2, 4.0, 1.4, 1.0)), DomainError);
    CHECK_THROWS_AS(riccati_constant(Params(3, 4.0, 1.5, 1.0)), DomainError);  // q = N/(N-1)
    CHECK_THROWS_AS(riccati_constant(Params(3, 4.0, 1.6, 1.0)), DomainError);
    CHECK_THROWS_AS(riccati_constant(Params(3, 4.0, 1.4, 0.0)), DomainError);
}

TEST_CASE("amplitude of the balanced gradient-source profile") {
    // q > p: growing profile X r^{|gamma|}
    double Xg = eikonal_constant(Params(3, 2.0, 4.0, 1.0));
    CHECK(rel_diff(Xg, 0.25) < 1e-14);
    for (double r : {0.1, 1.0, 7.0}) {
        double U = Xg * r * r;          // |gamma| = 2
        double dU = 2.0 * Xg * r;
        CHECK(rel_diff(std::pow(U, 2.0), std::pow(dU, 4.0)) < 1e-13);
    }

    // q < p: decaying profile X r^{-gamma}, gamma = 3, amplitude 27
    double Xd = eikonal_constant(Params(3, 2.0, 1.5, 1.0));
    CHECK(rel_diff(Xd, 27.0) < 1e-14);
    {
        double r = 2.0;
        double u = Xd * std::pow(r, -3.0);
        double du = -3.0 * Xd * std::pow(r, -4.0);
        CHECK(rel_diff(std::pow(u, 2.0), std::pow(std::abs(du), 1.5)) < 1e-13);
    }

    CHECK_THROWS_AS(eikonal_constant(Params(3, 2.0, 2.0, 1.0)), DomainError);
    CHECK_THROWS_AS(eikonal_constant(Params(3, 2.0, 4.0, 0.0)), DomainError);
}

TEST_CASE("critical mass threshold") {
    double mu3 = critical_mass_threshold(Params(3, 2.0, 4.0 / 3.0, 1.0));
    CHECK(rel_diff(mu3, 3.0 * std::pow(4.0, -2.0 / 3.0)) < 1e-14);
    CHECK(rel_diff(mu3, 1.1905507889761495) < 1e-14);

    double mu2 = critical_mass_threshold(Params(2, 3.0, 1.5, 1.0));
    CHECK(rel_diff(mu2, 4.0 * std::pow(3.0, -0.75)) < 1e-14);

    // off the critical line, or p too large for the dimension
    CHECK_THROWS_AS(critical_mass_threshold(Params(3, 2.0, 1.5, 1.0)), DomainError);
    CHECK_THROWS_AS(critical_mass_threshold(Params(3, 3.0, 1.5, 1.0)), DomainError);
    CHECK_THROWS_AS(critical_mass_threshold(Params(4, 2.0, 4.0 / 3.0, 1.0)), DomainError);
}

TEST_CASE("constant-amplitude roots across the threshold") {
    const double q = 4.0 / 3.0;
    const double mu = critical_mass_threshold(Params(3, 2.0, q, 1.0));

    auto roots_at = [&](double m) { return constant_solution_roots(Params(3, 2.0, q, m)); };

    // below threshold: none; at threshold: one tangent root (exactly x = 1 for
    // this parameter point); above: two, straddling it
    CHECK(roots_at(mu * (1.0 - 1e-3)).empty());

    auto tangent = roots_at(mu);
    REQUIRE(tangent.size() == 1);
    CHECK(rel_diff(tangent[0], 1.0) < 1e-6);

    auto pair = roots_at(mu * (1.0 + 1e-3));
    REQUIRE(pair.size() == 2);
    CHECK(pair[0] < 1.0);
    CHECK(pair[1] > 1.0);

    // every reported root really is a root
    const double alpha = 2.0;
    for (double m : {mu, mu * (1.0 + 1e-3), mu * 4.0}) {
        for (double x : roots_at(m)) {
            double g = -alpha * (alpha + 2.0 - 3.0) * x + m * std::pow(alpha * x, q) -
                       std::pow(x, 2.0);
            double scale = std::abs(alpha * (alpha + 2.0 - 3.0) * x) +
                           m * std::pow(alpha * x, q) + std::pow(x, 2.0);
            CHECK(std::abs(g) < 1e-9 * scale);
        }
    }

    // negative linear coefficient (p above N/(N-2)): always exactly one root;
    // with m = 0 it is (alpha(N-2-alpha))^{1/(p-1)} on the nose
    auto one = constant_solution_roots(Params(5, 2.0, q, 0.0));
    REQUIRE(one.size() == 1);
    CHECK(rel_diff(one[0], 2.0) < 1e-9);  // alpha=2, N-2-alpha=1, p-1=1

    CHECK_THROWS_AS(constant_solution_roots(Params(3, 2.0, 1.5, 1.0)), DomainError);
}

TEST_CASE("constants report presence matches the regime") {
    ConstantsReport C = constants_report(Params(3, 2.0, 4.0 / 3.0, 1.1905507889761495));
    CHECK(!C.omega0.has_value());  // p below N/(N-2)
    CHECK(C.xi_m.has_value());
    CHECK(C.X_m.has_value());
    REQUIRE(C.mu_star.has_value());
    CHECK(C.x_const_roots.size() == 1);
    CHECK(!C.theta_cap.has_value());

    ConstantsReport C2 = constants_report(Params(3, 4.0, 1.4, 1.0));
    CHECK(C2.omega0.has_value());
    CHECK(C2.xi_m.has_value());
    CHECK(C2.X_m.has_value());
    CHECK(!C2.mu_star.has_value());
    CHECK(C2.x_const_roots.empty());

    ConstantsReport C3 = constants_report(Params(3, 4.0, 1.6, 0.0));
    CHECK(!C3.xi_m.has_value());  // q past the removability threshold, and m = 0
    CHECK(!C3.X_m.has_value());
}

TEST_CASE("exponent recursion: affine map toward the balanced exponent") {
    // q < p: A -> (A+1) q/p contracts to q/(p-q)
    ExponentIteration it = exponent_iteration(Params(3, 2.0, 1.5, 1.0),
                                              IterationVariant::suit, 0.1);
    CHECK(it.converged);
    CHECK(it.stop_reason == IterationStop::fixed_point);
    CHECK(rel_diff(it.limit, 3.0) < 1e-9);
    CHECK(it.schedule.front() == 0.1);
    CHECK(it.n_steps == int(it.schedule.size()) - 1);

    // q > p: the map expands, no fixed point is reached
    ExponentIteration div = exponent_iteration(Params(3, 1.5, 2.0, 1.0),
                                               IterationVariant::suit, 0.1);
    CHECK(!div.converged);

    CHECK_THROWS_AS(exponent_iteration(Params(3, 2.0, 2.0, 1.0), IterationVariant::suit, 0.1),
                    DomainError);
}

TEST_CASE("exponent recursion: capped improvement schedules") {
    // cap alpha + 2 - N = 1/3 (N=3, p=2.5); growth crosses it in a few steps
    ExponentIteration a = exponent_iteration(Params(3, 2.5, 1.3, 1.0),
                                             IterationVariant::si31, 0.01);
    CHECK(a.converged);
    CHECK(a.stop_reason == IterationStop::cap_crossed);
    CHECK(rel_diff(a.limit, 1.0 / 3.0) < 1e-14);
    CHECK(a.n_steps < 20);

    // cap alpha = 2 (N=3, p=2 on the critical line, sigma = 0)
    ExponentIteration b = exponent_iteration(Params(3, 2.0, 4.0 / 3.0, 1.0),
                                             IterationVariant::si34, 0.01);
    CHECK(b.converged);
    CHECK(b.stop_reason == IterationStop::cap_crossed);
    CHECK(rel_diff(b.limit, 2.0) < 1e-14);

    // schedule values never exceed the cap once clamped
    for (double th : b.schedule)
        CHECK(th <= 2.0 + 1e-14);

    // si31 needs a positive cap
    CHECK_THROWS_AS(exponent_iteration(Params(3, 4.0, 1.4, 1.0), IterationVariant::si31, 0.01),
                    DomainError);
}

TEST_CASE("enum names") {
    CHECK(std::string(to_string(Ternary::at)) == "at");
    CHECK(std::string(to_string(Ordering::greater)) == "greater");
    CHECK(std::string(to_string(IterationVariant::si34)) == "si34");
    CHECK(std::string(to_string(IterationStop::cap_crossed)) == "cap_crossed");
}
