#include <doctest.h>

#include <cmath>

#include "holo/certify.hpp"

using namespace holo;

namespace {

HoloCurve graph_curve() {  // t -> (t, 1)
    HoloCurve c;
    c.components = {ex::var(0), ex::cst(cx(1.0))};
    c.provenance = "test";
    return c;
}

}  // namespace

TEST_CASE("check_interpolation") {
    HoloCurve c = graph_curve();

    SUBCASE("exact point") {
        Section s = check_interpolation(c, {{cx(0.0), {{cx(0.0), cx(1.0)}}}});
        CHECK(s.pass);
        CHECK(s.data.at("max_residual").get<double>() == 0.0);
    }

    SUBCASE("jet rows on e^{rz} - 1") {
        const double r = 0.7;
        HoloCurve e;
        e.components = {ex::shift(ex::exp(ex::scale(cx(r), ex::var(0))), cx(-1.0))};
        // f(0) = 0, f'(0) = r
        Section s = check_interpolation(e, {{cx(0.0), {{cx(0.0)}, {cx(r)}}}});
        CHECK(s.pass);
        CHECK(s.data.at("max_residual").get<double>() <= 1e-14);
    }

    SUBCASE("perturbed curve fails at 1e-8") {
        HoloCurve p;
        p.components = {ex::shift(ex::var(0), cx(1e-6)), ex::cst(cx(1.0))};
        Section s = check_interpolation(p, {{cx(0.0), {{cx(0.0), cx(1.0)}}}});
        CHECK_FALSE(s.pass);
        CHECK(s.data.at("max_residual").get<double>() == doctest::Approx(1e-6));
    }
}

TEST_CASE("check_avoidance") {
    HoloCurve c = graph_curve();

    SUBCASE("hyperplane {z2=0}: margin 1") {
        auto F = ForbiddenSet::of_hyperplanes(coord_hyperplanes(2, {1}));
        Section s = check_avoidance(c, F, 4.0, 0.5);
        CHECK(s.pass);
        CHECK(s.data.at("margin").get<double>() == doctest::Approx(1.0));
        CHECK(s.data.at("grid").at("pitch").get<double>() == 0.5);
    }

    SUBCASE("structural pass for exponential components") {
        HoloCurve e;  // (e^{-t^2}, e^{t})
        e.components = {ex::exp(ex::neg(ex::poly({cx(0), cx(0), cx(1)}, ex::var(0)))),
                        ex::exp(ex::var(0))};
        auto F = ForbiddenSet::of_hyperplanes(coord_hyperplanes(2, {0, 1}));
        Section s = check_avoidance(e, F, 4.0, 0.5);
        CHECK(s.pass);
        CHECK(s.data.at("structural").get<bool>());
    }

    SUBCASE("curve through F fails with margin 0") {
        // t -> (t, 0) lies inside {z2 = 0}
        HoloCurve bad;
        bad.components = {ex::var(0), ex::cst(cx(0.0))};
        auto F = ForbiddenSet::of_hyperplanes(coord_hyperplanes(2, {1}));
        Section s = check_avoidance(bad, F, 4.0, 0.5);
        CHECK_FALSE(s.pass);
        CHECK(s.data.at("margin").get<double>() == 0.0);
    }

    SUBCASE("convex body margin") {
        // unit box at (10, 10, 10, 10): curve (t, 1) stays far away for R=2
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, 9.0);
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, 11.0);
        Section s = check_avoidance(c, ForbiddenSet::of_body(box_body(lo, hi)), 2.0, 0.5);
        CHECK(s.pass);
        CHECK(s.data.at("margin").get<double>() > 5.0);
    }

    SUBCASE("product set distance") {
        // F = unit disc box around 0 in C, G likewise; curve (t, 1+2i)
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
        auto F = ForbiddenSet::of_product(box_body(lo, hi), box_body(lo, hi), 1, 1);
        HoloCurve h;
        h.components = {ex::var(0), ex::cst(cx(1.0, 2.0))};
        Section s = check_avoidance(h, F, 2.0, 0.25);
        CHECK(s.pass);  // second block at distance 1 from G
        CHECK(s.data.at("margin").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("check_immersion") {
    SUBCASE("graph curve has floor 1") {
        Section s = check_immersion(graph_curve(), 4.0, 0.5);
        CHECK(s.pass);
        CHECK(s.data.at("floor").get<double>() == doctest::Approx(1.0));
    }

    SUBCASE("cusp curve fails near 0") {
        HoloCurve cusp;  // (t^2, t^3), phi'(0) = 0
        cusp.components = {ex::poly({cx(0), cx(0), cx(1)}, ex::var(0)),
                           ex::poly({cx(0), cx(0), cx(0), cx(1)}, ex::var(0))};
        Section s = check_immersion(cusp, 4.0, 0.5);
        CHECK_FALSE(s.pass);
        CHECK(s.data.at("floor").get<double>() <= 1e-10);
    }
}

TEST_CASE("check_injectivity") {
    SUBCASE("graph form passes") {
        Section s = check_injectivity(graph_curve(), 4.0, 200);
        CHECK(s.pass);
        CHECK(s.data.at("min_separation").get<double>() >= 0.01 - 1e-12);
    }

    SUBCASE("even curve fails on the symmetric sample set") {
        HoloCurve even;  // (t^2, 0): phi(t) = phi(-t)
        even.components = {ex::poly({cx(0), cx(0), cx(1)}, ex::var(0)), ex::cst(cx(0.0))};
        Section s = check_injectivity(even, 4.0, 200);
        CHECK_FALSE(s.pass);
        CHECK(s.data.at("min_separation").get<double>() <= 1e-12);
    }

    SUBCASE("validation") { CHECK_THROWS_AS(check_injectivity(graph_curve(), 4.0, 1), Error); }
}

TEST_CASE("properness_proxy") {
    SUBCASE("graph curve: values sqrt(R^2+1), increasing") {
        Section s = properness_proxy(graph_curve(), {1.0, 2.0, 4.0}, 3.0);
        CHECK(s.pass);
        const auto& vals = s.data.at("values");
        for (size_t i = 0; i < 3; ++i) {
            const double R = vals[i].at("radius").get<double>();
            CHECK(vals[i].at("min_modulus").get<double>() ==
                  doctest::Approx(std::sqrt(R * R + 1.0)));
        }
        CHECK(s.data.at("disclaimer").get<std::string>().find("PROXY") != std::string::npos);
    }

    SUBCASE("bounded curve records a proxy fail") {
        HoloCurve b;  // (e^{-t^2}, e^{-t sqrt 2})
        b.components = {ex::exp(ex::neg(ex::poly({cx(0), cx(0), cx(1)}, ex::var(0)))),
                        ex::exp(ex::scale(cx(-std::sqrt(2.0)), ex::var(0)))};
        // min modulus on circles does not grow: tiny threshold still fails
        Section s = properness_proxy(b, {1.0, 2.0, 3.0}, 1.0);
        CHECK_FALSE(s.pass);
    }

    SUBCASE("radii must increase") {
        CHECK_THROWS_AS(properness_proxy(graph_curve(), {2.0, 1.0}, 0.0), Error);
    }
}

TEST_CASE("lempert_witness") {
    CHECK(lempert_witness(cx(0.0), cx(1.0), 10.0, true) == doctest::Approx(0.1));
    CHECK(lempert_witness(cx(0.0), cx(1.0), 20.0, true) ==
          doctest::Approx(0.5 * lempert_witness(cx(0.0), cx(1.0), 10.0, true)));
    CHECK_THROWS_AS(lempert_witness(cx(0.0), cx(1.0), 10.0, false), Error);
}

TEST_CASE("serialization round-trips") {
    SUBCASE("curve") {
        HoloCurve c = graph_curve();
        c.stages = json::array({{{"stage", "demo"}}});
        HoloCurve r = curve_from_json(curve_to_json(c));
        CHECK(curve_to_json(r) == curve_to_json(c));
        CHECK(r.provenance == "test");
    }

    SUBCASE("forbidden sets") {
        auto H = ForbiddenSet::of_hyperplanes(coord_hyperplanes(3, {0, 2}));
        CHECK(forbidden_to_json(forbidden_from_json(forbidden_to_json(H))) ==
              forbidden_to_json(H));
        Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
        Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
        auto P = ForbiddenSet::of_product(box_body(lo, hi), box_body(lo, hi), 1, 1);
        CHECK(forbidden_to_json(forbidden_from_json(forbidden_to_json(P))) ==
              forbidden_to_json(P));
    }

    SUBCASE("certificate") {
        Certificate c;
        c.R_ver = 12.0;
        c.sections.push_back({"interpolation", true, json{{"max_residual", 0.0}}});
        c.sections.push_back({"avoidance", false, json{{"margin", 0.0}}});
        json j = certificate_to_json(c);
        CHECK(j.at("schema").get<int>() == 1);
        CHECK_FALSE(j.at("pass").get<bool>());
        Certificate r = certificate_from_json(j);
        CHECK(certificate_to_json(r) == j);
        CHECK(r.find("avoidance") != nullptr);
        CHECK_FALSE(r.find("avoidance")->pass);
        CHECK(r.find("missing") == nullptr);
    }
}
