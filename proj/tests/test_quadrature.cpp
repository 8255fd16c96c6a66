#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "radlab/quadrature.hpp"

using namespace radlab;

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("single panel is exact on low-degree polynomials") {
    auto one = gk_adaptive([](double) { return 1.0; }, 0.0, 1.0);
    CHECK(one.converged);
    CHECK(one.panels == 1);
    CHECK(rel_diff(one.value, 1.0) < 1e-14);

    auto x5 = gk_adaptive([](double x) { return x * x * x * x * x; }, 0.0, 2.0);
    CHECK(x5.panels == 1);
    CHECK(rel_diff(x5.value, 64.0 / 6.0) < 1e-14);
}

TEST_CASE("smooth integrands") {
    auto s = gk_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(s.converged);
    CHECK(rel_diff(s.value, 2.0) < 1e-13);

    auto e = gk_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(rel_diff(e.value, std::exp(1.0) - 1.0) < 1e-13);

    auto osc = gk_adaptive([](double x) { return std::cos(50.0 * x); }, 0.0, 1.0);
    CHECK(osc.converged);
    CHECK(rel_diff(osc.value, std::sin(50.0) / 50.0) < 1e-11);
}

TEST_CASE("adaptive refinement resolves narrow peaks") {
    const double w = 1e-4;  // half-width
    auto centered = gk_adaptive(
        [w](double x) { return 1.0 / (x * x + w * w); }, -1.0, 1.0);
    CHECK(centered.converged);
    CHECK(rel_diff(centered.value, 2.0 * std::atan(1.0 / w) / w) < 1e-9);

    auto off = gk_adaptive(
        [w](double x) { return 1.0 / ((x - 0.3) * (x - 0.3) + w * w); }, 0.0, 1.0);
    CHECK(off.converged);
    double exact = (std::atan(0.7 / w) + std::atan(0.3 / w)) / w;
    CHECK(rel_diff(off.value, exact) < 1e-9);
    CHECK(off.panels > 5);
    CHECK(off.panels < 4000);
}

TEST_CASE("degenerate and reversed intervals") {
    auto pt = gk_adaptive([](double x) { return x; }, 3.0, 3.0);
    CHECK(pt.converged);
    CHECK(pt.value == 0.0);

    auto rev = gk_adaptive([](double x) { return x; }, 2.0, 1.0);
    CHECK(!rev.converged);
}

TEST_CASE("failure is reported, not papered over") {
    QuadOptions tight;
    tight.max_panels = 1;
    auto bad = gk_adaptive([](double x) { return 1.0 / (x * x + 1e-6); }, -1.0, 1.0, tight);
    CHECK(!bad.converged);

    CHECK_THROWS_WITH_AS(
        integrate_or_throw([](double x) { return 1.0 / (x * x + 1e-6); }, -1.0, 1.0,
                           "tail", tight),
        "tail: quadrature failed to reach tolerance", NumericError);
}

TEST_CASE("upper-endpoint power singularities") {
    // the coordinate-based route recomputes b - s inside the integrand, which
    // costs cancellation noise near the endpoint; ~1e-10 is its floor
    double a = integrate_upper_singular(
        [](double s) { return std::pow(1.0 - s, -0.5); }, 0.0, 1.0, 0.5, "t1");
    CHECK(rel_diff(a, 2.0) < 1e-10);

    double b = integrate_upper_singular(
        [](double s) { return s * std::pow(1.0 - s, -0.5); }, 0.0, 1.0, 0.5, "t2");
    CHECK(rel_diff(b, 4.0 / 3.0) < 1e-10);

    // (1+s)(1-s)^{-0.3}: substituting u = 1-s gives 2/0.7 - 1/1.7
    double d = integrate_upper_singular(
        [](double s) { return (1.0 + s) * std::pow(1.0 - s, -0.3); }, 0.0, 1.0, 0.3, "t4");
    CHECK(rel_diff(d, 2.0 / 0.7 - 1.0 / 1.7) < 1e-10);

    CHECK(integrate_upper_singular([](double) { return 1.0; }, 2.0, 2.0, 0.5, "t5") == 0.0);
    CHECK_THROWS_AS(
        integrate_upper_singular([](double) { return 1.0; }, 0.0, 1.0, 1.0, "t6"),
        DomainError);

    // near strength 1 the cancellation swallows a visible fraction of the
    // mass; the route must refuse rather than return it quietly
    bool honest = false;
    try {
        double c = integrate_upper_singular(
            [](double s) { return std::pow(1.0 - s, -0.9); }, 0.0, 1.0, 0.9, "t3");
        honest = rel_diff(c, 10.0) < 1e-6;
    } catch (const NumericError&) {
        honest = true;
    }
    CHECK(honest);
}

TEST_CASE("distance-based singular quadrature keeps full precision") {
    // same strength-0.9 integral, but the integrand sees the exact distance
    double c = integrate_singular_origin(
        [](double u) { return std::pow(u, -0.9); }, 1.0, 0.9, "t1");
    CHECK(rel_diff(c, 10.0) < 1e-12);

    double h = integrate_singular_origin(
        [](double u) { return std::pow(u, -0.5); }, 4.0, 0.5, "t2");
    CHECK(rel_diff(h, 2.0 * 2.0) < 1e-12);

    // stable small-u pattern: (1 - (1+u)^{-3})^{-1/2} ~ (3u)^{-1/2};
    // reference from the closed antiderivative of ((1+u)^3 - 1)^{-1/2}(1+u)^{3/2}
    // is awkward, so cross-check against the coordinate route on a safe window
    // plus a small-u power tail handled analytically.
    auto fd = [](double u) {
        double core = -std::expm1(-3.0 * std::log1p(u));
        return std::pow(core, -0.5);
    };
    double whole = integrate_singular_origin(fd, 1.0, 0.5, "t3");
    double outer = integrate_or_throw(
        [&](double t) { return std::pow(1.0 - std::pow(t, -3.0), -0.5); }, 1.0 + 1e-4,
        2.0, "t3ref");
    double inner = integrate_singular_origin(fd, 1e-4, 0.5, "t3head");
    CHECK(rel_diff(whole, outer + inner) < 1e-10);
    // and the head really follows the (3u)^{-1/2} law at this scale
    CHECK(rel_diff(inner, 2.0 * std::sqrt(1e-4 / 3.0)) < 2e-3);

    CHECK(integrate_singular_origin([](double) { return 1.0; }, 0.0, 0.5, "t4") == 0.0);
    CHECK_THROWS_AS(integrate_singular_origin([](double) { return 1.0; }, 1.0, 1.5, "t5"),
                    DomainError);
}

TEST_CASE("lower-endpoint power singularities") {
    double a = integrate_lower_singular(
        [](double s) { return std::pow(s, -0.7); }, 0.0, 1.0, 0.7, "t1");
    CHECK(rel_diff(a, 1.0 / 0.3) < 1e-10);

    // s (s-2)^{-1/2} on [2,5]:. with u = s-2 this is 2*3^{1.5}/3 + 4*sqrt(3)
    double b = integrate_lower_singular(
        [](double s) { return s * std::pow(s - 2.0, -0.5); }, 2.0, 5.0, 0.5, "t2");
    CHECK(rel_diff(b, 6.0 * std::sqrt(3.0)) < 1e-11);

    CHECK_THROWS_AS(
        integrate_lower_singular([](double) { return 1.0; }, 0.0, 1.0, -0.1, "t3"),
        DomainError);
}

TEST_CASE("integrals to infinity") {
    double a = integrate_to_infinity([](double s) { return 1.0 / (s * s); }, 1.0, "t1");
    CHECK(rel_diff(a, 1.0) < 1e-13);

    double b = integrate_to_infinity([](double s) { return std::pow(s, -3.0); }, 2.0, "t2");
    CHECK(rel_diff(b, 0.125) < 1e-12);

    double c = integrate_to_infinity([](double s) { return std::exp(-s); }, 1.0, "t3");
    CHECK(rel_diff(c, std::exp(-1.0)) < 1e-9);

    CHECK_THROWS_AS(integrate_to_infinity([](double) { return 0.0; }, 0.0, "t4"),
                    DomainError);
}

TEST_CASE("repeat runs are bitwise identical") {
    auto f = [](double x) { return std::sin(30.0 * x) / (x * x + 1e-5); };
    auto r1 = gk_adaptive(f, -1.0, 2.0);
    auto r2 = gk_adaptive(f, -1.0, 2.0);
    CHECK(r1.value == r2.value);
    CHECK(r1.error == r2.error);
    CHECK(r1.panels == r2.panels);
}
