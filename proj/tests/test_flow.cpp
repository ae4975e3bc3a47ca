#include <doctest.h>

#include <cmath>

#include "holo/flow.hpp"

using namespace holo;

namespace {

FieldTerm shear_field(int axis, ExprPtr g) {
    FieldTerm t;
    t.kind = FieldTerm::Kind::Shear;
    t.axis = axis;
    t.g = std::move(g);
    return t;
}

FieldTerm overshear_field(int axis, ExprPtr g) {
    FieldTerm t;
    t.kind = FieldTerm::Kind::Overshear;
    t.axis = axis;
    t.g = std::move(g);
    return t;
}

double dist(const CPoint& a, const CPoint& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("exact_flow closed forms") {
    FieldTerm sh = shear_field(0, ex::var(0));  // velocity z2 on axis 0
    CPoint p{cx(0.0), cx(3.0)};
    CHECK(dist(apply_primitive(exact_flow(sh, 1.0), p), {cx(3.0), cx(3.0)}) < 1e-15);
    CHECK(dist(apply_primitive(exact_flow(sh, 0.0), p), p) < 1e-15);

    FieldTerm os = overshear_field(0, ex::cst(cx(1.0)));
    CPoint q{cx(1.0), cx(-2.0, 0.5)};
    CPoint r = apply_primitive(exact_flow(os, std::log(2.0)), q);
    CHECK(std::abs(r[0] - cx(2.0)) < 1e-12);
    CHECK(std::abs(r[1] - q[1]) == 0.0);
}

TEST_CASE("one-parameter group law to 1e-12") {
    FieldTerm os = overshear_field(1, ex::poly({cx(0.5), cx(0, 1)}, ex::var(0)));
    for (double s1 : {0.3, -0.7}) {
        for (double s2 : {0.9, 0.11}) {
            CPoint p{cx(1.2, -0.4), cx(0.3, 2.0)};
            CPoint a = apply_primitive(exact_flow(os, s2), apply_primitive(exact_flow(os, s1), p));
            CPoint b = apply_primitive(exact_flow(os, s1 + s2), p);
            CHECK(dist(a, b) <= 1e-12);
        }
    }
}

TEST_CASE("single autonomous term telescopes exactly for every N") {
    SplittingSchedule s;
    s.n = 2;
    s.terms = {shear_field(0, ex::poly({cx(0), cx(1), cx(0.5)}, ex::var(0)))};
    CPoint p{cx(0.7, 0.1), cx(-1.0, 0.6)};
    const CPoint one = apply_aut(splitting_compose([&] {
                                     auto t = s;
                                     t.N = 1;
                                     return t;
                                 }()),
                                 p);
    for (int N : {2, 5, 17}) {
        auto t = s;
        t.N = N;
        CHECK(dist(apply_aut(splitting_compose(t), p), one) <= 1e-13);
    }
}

TEST_CASE("commuting pair: N=1 equals N=64 to 1e-12") {
    // Disjoint axes acting on disjoint variables in C^4: flows commute.
    SplittingSchedule s;
    s.n = 4;
    s.terms = {shear_field(0, ex::var(0)),   // axis 0 driven by z2
               shear_field(2, ex::var(2))};  // axis 2 driven by z4
    std::vector<CPoint> probes{{cx(1, 1), cx(0.5), cx(-2), cx(0, 1)},
                               {cx(0), cx(2, -1), cx(1), cx(-0.5, 0.5)}};
    auto rows = convergence_study(s, {1, 64}, probes);
    CHECK(rows[0].error <= 1e-12);
    CHECK(rows[1].error <= 1e-12);
}

TEST_CASE("non-commuting benchmark: empirical first order") {
    SplittingSchedule s;
    s.n = 2;
    s.terms = {shear_field(0, ex::scale(cx(0.2), ex::var(0))),
               shear_field(1, ex::scale(cx(0.2), ex::var(0)))};
    std::vector<CPoint> probes{{cx(1, 0.5), cx(-0.5, 1)},
                               {cx(2, -1), cx(0.3, 0.2)},
                               {cx(-1.5), cx(1.0, -0.7)}};
    auto rows = convergence_study(s, {8, 16, 32, 64}, probes);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        const double ratio = rows[i].error / rows[i + 1].error;
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
    }
    CHECK(rows.back().error < 1e-3);
    // monotone up to factor-1.1 slack
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        CHECK(rows[i + 1].error <= 1.1 * rows[i].error);
}

TEST_CASE("N=1 row equals the plain single-step composition error") {
    SplittingSchedule s;
    s.n = 2;
    s.terms = {shear_field(0, ex::scale(cx(0.2), ex::var(0))),
               shear_field(1, ex::scale(cx(0.2), ex::var(0)))};
    std::vector<CPoint> probes{{cx(1, 0.5), cx(-0.5, 1)}};
    auto rows = convergence_study(s, {1}, probes);
    s.N = 1;
    const CPoint lie = apply_aut(splitting_compose(s), probes[0]);
    const CPoint ref = reference_time_one(s, probes)[0];
    CHECK(rows[0].error == doctest::Approx(dist(lie, ref)).epsilon(1e-12));
}

TEST_CASE("time-dependent weights are frozen per window") {
    // w(t) = t on a single shear field: splitting freezes at t = j/N, so the
    // N-step answer approaches the exact time-one map z1 += z2 * 1/2.
    FieldTerm t = shear_field(0, ex::var(0));
    t.weight = {0.0, 1.0, 0.0, 0.0};
    SplittingSchedule s;
    s.n = 2;
    s.terms = {t};
    CPoint p{cx(0.0), cx(2.0)};
    auto rows = convergence_study(s, {4, 512}, {p});
    CHECK(rows[1].error < rows[0].error);
    s.N = 512;
    const CPoint img = apply_aut(splitting_compose(s), p);
    CHECK(std::abs(img[0] - cx(1.0)) < 5e-3);  // exact integral = 1/2 * 2
    const CPoint ref = reference_time_one(s, {p})[0];
    CHECK(std::abs(ref[0] - cx(1.0)) < 1e-10);
}

TEST_CASE("factors fix the declared hyperplanes when g carries the factor") {
    // g = z2 * 1 vanishes on {z2 = 0}: every splitting factor is a shear on
    // axis 0 whose function vanishes on the z2 hyperplane.
    SplittingSchedule s;
    s.n = 2;
    s.terms = {shear_field(0, ex::var(0))};
    s.N = 4;
    CompositeAut c = splitting_compose(s);
    CHECK(fixes_hyperplanes(c, coord_hyperplanes(2, {1})));
}

TEST_CASE("csv output") {
    std::string csv = convergence_csv({{8, 0.5}, {16, 0.25}});
    CHECK(csv.substr(0, 8) == "N,error\n");
    CHECK(csv.find("8,0.5") != std::string::npos);
    CHECK(csv.find("16,0.25") != std::string::npos);
}

TEST_CASE("schedule JSON round-trip") {
    SplittingSchedule s;
    s.n = 3;
    s.N = 7;
    FieldTerm t = overshear_field(1, ex::mul(ex::var(0), ex::var(1)));
    t.weight = {1.0, -0.5, 0.0, 2.0};
    s.terms = {t, shear_field(2, ex::cst(cx(1, 1)))};
    SplittingSchedule r = schedule_from_json(schedule_to_json(s));
    CHECK(r.n == 3);
    CHECK(r.N == 7);
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms[0].kind == FieldTerm::Kind::Overshear);
    CHECK(r.terms[0].weight == std::array<double, 4>{1.0, -0.5, 0.0, 2.0});
    CHECK(schedule_to_json(r) == schedule_to_json(s));
}

TEST_CASE("validation errors") {
    SplittingSchedule s;
    s.n = 2;
    s.N = 0;
    s.terms = {shear_field(0, ex::var(0))};
    CHECK_THROWS_AS(splitting_compose(s), Error);
    s.N = 1;
    s.terms[0].axis = 5;
    CHECK_THROWS_AS(splitting_compose(s), Error);
}
