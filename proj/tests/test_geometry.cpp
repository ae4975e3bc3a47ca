#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/convex.hpp"
#include "holo/region.hpp"
#include "oracles.hpp"

using namespace holo;

TEST_CASE("comb membership") {
    auto A1 = comb_A(1);
    CHECK(region_contains(A1, cx(-4, 7)));
    CHECK_FALSE(region_contains(A1, cx(-2, 7)));

    auto A0 = comb_A0(3);
    CHECK_FALSE(region_contains(A0, cx(6, 7)));   // inside the removed tooth
    CHECK(region_contains(A0, cx(6, 8.5)));       // above the tooth
    CHECK(region_contains(A0, cx(0, 0)));
    CHECK_FALSE(region_contains(A0, cx(-2, 0)));  // Re < -1

    auto E0 = comb_E0(3);
    CHECK(region_contains(E0, cx(0, 0)));
    CHECK_FALSE(region_contains(E0, cx(5, 7)));
    CHECK(region_contains(E0, cx(5, 9.5)));

    auto empty = rg::region_intersection({rg::re_le(-1.0), rg::re_ge(0.0)});
    CHECK_FALSE(region_contains(empty, cx(0, 0)));
}

TEST_CASE("sample_region") {
    auto hp = rg::re_le(-1.0);
    for (cx z : sample_region(hp, 2.0, 0.5)) {
        CHECK(z.real() <= -1.0);
        CHECK(std::abs(z) <= 2.0);
    }

    auto d = rg::disk(0.0, 1.0);
    CHECK(sample_region(d, 1.0, 0.25).size() == 49);

    CHECK(sample_region(comb_A(1), 4.0, 0.5).empty());  // nearest point has |z| = 5

    CHECK_THROWS_AS(sample_region(d, 1e4, 1e-3), Error);
}

TEST_CASE("region JSON round-trip") {
    auto r = rg::region_union({comb_A0(2), rg::disk(cx(1, -2), 0.5),
                               rg::complement(rg::vstrip(-1.0, 1.0)), rg::reflect(comb_E(2))});
    auto back = region_from_json(region_to_json(r));
    CHECK(region_to_json(back).dump() == region_to_json(r).dump());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-12.0, 12.0);
    for (int i = 0; i < 500; ++i) {
        const cx z(u(rng), u(rng));
        CHECK(region_contains(r, z) == region_contains(back, z));
    }
}

TEST_CASE("body distances") {
    ConvexBody ball = ball_body(Eigen::VectorXd::Zero(2), 1.0, 64);
    CHECK(std::abs(body_distance(ball, {{cx(2, 0)}}) - 1.0) < 1e-6);
    CHECK(body_distance(ball, {{cx(0.2, 0.1)}}) == 0.0);

    ConvexBody quad = body_from_rows({{1, 0, 0, 0}, {0, 0, 1, 0}}, {-1, -1});
    CHECK(std::abs(body_distance(quad, {{cx(0, 0), cx(0, 0)}}) - std::sqrt(2.0)) < 1e-6);

    // zero distance iff LP-feasible membership
    Eigen::VectorXd inside(4);
    inside << -2, 5, -3, -7;
    CHECK(body_contains(quad, inside));
    CHECK(point_distance(quad, inside) == 0.0);
}

TEST_CASE("chebyshev center") {
    ConvexBody box = box_body(Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0));
    double r = 0.0;
    Eigen::VectorXd c = cheb_center(box, &r);
    CHECK(c.norm() < 1e-8);
    CHECK(std::abs(r - 1.0) < 1e-8);
}

TEST_CASE("max_support and feasibility") {
    ConvexBody box = box_body(Eigen::VectorXd::Constant(4, -2.0), Eigen::VectorXd::Constant(4, 3.0));
    bool bounded = false;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
    u(2) = 1.0;
    CHECK(std::abs(max_support(box, u, &bounded) - 3.0) < 1e-9);
    CHECK(bounded);

    ConvexBody hp = body_from_rows({{1, 0, 0, 0}}, {0});
    max_support(hp, -u, &bounded);  // unbounded direction
    // direction x2 -> -inf is unconstrained
    CHECK_FALSE(bounded);

    ConvexBody empty = body_from_rows({{1, 0}, {-1, 0}}, {-1, 0});
    CHECK_FALSE(body_feasible(empty));
}

TEST_CASE("classify_condition_i on the corpus agrees with the direction-grid oracle") {
    for (const auto& tc : oracle::classify_corpus()) {
        const ConvexClass got = classify_condition_i(tc.F, tc.n);
        CHECK(got == tc.expected);
        const bool line_bit = oracle::grid_has_complex_line(tc.F, tc.n);
        CHECK(line_bit == (got != ConvexClass::NoComplexLine));
    }
}

TEST_CASE("affine_image maps membership correctly") {
    ConvexBody box = box_body(Eigen::VectorXd::Constant(4, -1.0), Eigen::VectorXd::Constant(4, 1.0));
    Eigen::MatrixXcd M(2, 2);
    M << cx(2, 0), cx(0, 0), cx(0, 0), cx(0, 1);
    Eigen::VectorXcd t(2);
    t << cx(1, 0), cx(0, 0);
    ConvexBody img = affine_image(box, M, t);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 300; ++i) {
        CPoint z{cx(u(rng), u(rng)), cx(u(rng), u(rng))};
        CPoint w{M(0, 0) * z[0] + t(0), M(1, 1) * z[1]};
        CHECK(body_contains(box, to_real(z), 1e-12) == body_contains(img, to_real(w), 1e-7));
    }
}

TEST_CASE("normalize_separation produces certified containments") {
    auto check_T = [](const ConvexBody& F, const std::vector<CPoint>& G,
                      const std::vector<CPoint>& extra) {
        AffineMap T = normalize_separation(F, G, extra);
        ConvexBody TF = affine_image(F, T.M, T.t);
        bool bounded = false;
        Eigen::VectorXd u1 = Eigen::VectorXd::Zero(4);
        u1(0) = 1.0;  // Re z1
        Eigen::VectorXd u2 = Eigen::VectorXd::Zero(4);
        u2(2) = 1.0;  // Re z2
        CHECK(max_support(TF, u1, &bounded) <= -1.0 + 1e-9);
        CHECK(max_support(TF, u2, &bounded) <= -1.0 + 1e-9);
        for (const auto& g : G) CHECK(T.apply(g)[0].real() >= -1e-9);
        for (const auto& e : extra) CHECK(T.apply(e)[1].real() >= -1e-9);
    };

    check_T(body_from_rows({{1, 0, 0, 0}, {0, 0, 1, 0}}, {-5, -5}), {{cx(1), cx(1)}},
            {{cx(2), cx(2)}});

    // segment from (-2,-2) to (-3,-3) on the real diagonal
    ConvexBody seg = body_from_rows({{1, 0, -1, 0},
                                     {-1, 0, 1, 0},
                                     {0, 1, 0, 0},
                                     {0, -1, 0, 0},
                                     {0, 0, 0, 1},
                                     {0, 0, 0, -1},
                                     {1, 0, 0, 0},
                                     {-1, 0, 0, 0}},
                                    {0, 0, 0, 0, 0, 0, -2, 3});
    check_T(seg, {{cx(5), cx(0, 5)}}, {{cx(5), cx(0, 5)}});
}

TEST_CASE("body JSON round-trip") {
    ConvexBody F = ball_body(Eigen::VectorXd::Zero(4), 2.0, 12);
    F.product_kl = {1, 1};
    ConvexBody back = body_from_json(body_to_json(F));
    CHECK(body_to_json(back).dump() == body_to_json(F).dump());
    CHECK(back.product_kl == F.product_kl);
}
