#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/aut.hpp"

using namespace holo;

namespace {

CPoint random_point(std::mt19937_64& rng, int n, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    CPoint p(n);
    for (auto& c : p) c = cx(u(rng), u(rng));
    return p;
}

double dist(const CPoint& a, const CPoint& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("primitive application") {
    CompositeAut id;
    id.n = 2;
    CPoint z{cx(1), cx(0, 2)};
    CHECK(apply_aut(id, z) == z);

    auto sh = PrimitiveAut::shear(0, ex::var(0));  // z1 += z2
    CPoint w = apply_primitive(sh, {cx(1), cx(3)});
    CHECK(w[0] == cx(4));
    CHECK(w[1] == cx(3));

    auto os0 = PrimitiveAut::overshear(0, ex::cst(0.0));
    CHECK(apply_primitive(os0, z) == z);

    // overshears map {z_axis = 0} to itself exactly
    auto os = PrimitiveAut::overshear(0, ex::poly({cx(1), cx(2)}, ex::var(0)));
    CPoint on_axis{cx(0), cx(5, -1)};
    CPoint img = apply_primitive(os, on_axis);
    CHECK(img[0] == cx(0));
    CHECK(img[1] == on_axis[1]);
}

TEST_CASE("twist and its inverse") {
    const double g = 0.3;
    auto tw = PrimitiveAut::twist(g);
    CPoint z{cx(1, 1), cx(2, 0)};
    CPoint w = apply_primitive(tw, z);
    const cx e = std::exp(g * z[0] * z[1]);
    CHECK(std::abs(w[0] - z[0] * e) < 1e-14);
    CHECK(std::abs(w[1] - z[1] / e) < 1e-14);
    // the product z1 z2 is invariant
    CHECK(std::abs(w[0] * w[1] - z[0] * z[1]) < 1e-13);

    CompositeAut a;
    a.n = 2;
    a.factors = {tw};
    CPoint back = apply_aut(invert_aut(a), w);
    CHECK(dist(back, z) < 1e-12);
}

TEST_CASE("round-trip apply then invert on random composites") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + (trial % 2);
        CompositeAut a;
        a.n = n;
        for (int f = 0; f < 4; ++f) {
            const int kind = trial % 3 == 0 ? f % 2 : static_cast<int>(rng() % 3);
            const int axis = static_cast<int>(rng() % n);
            std::vector<cx> coef{cx(u(rng), u(rng)), cx(u(rng), u(rng)), cx(0.2 * u(rng))};
            ExprPtr fe = ex::poly(coef, ex::var(static_cast<int>(rng() % (n - 1))));
            if (kind == 0)
                a.factors.push_back(PrimitiveAut::shear(axis, fe));
            else if (kind == 1)
                a.factors.push_back(PrimitiveAut::overshear(axis, ex::scale(0.2, fe)));
            else {
                Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
                M(0, n - 1) += cx(u(rng), u(rng));
                M(n - 1, 0) += cx(0.3 * u(rng));
                Eigen::VectorXcd t(n);
                for (int i = 0; i < n; ++i) t(i) = cx(u(rng), u(rng));
                a.factors.push_back(PrimitiveAut::affine(M, t));
            }
        }
        CompositeAut ai = invert_aut(a);
        for (int p = 0; p < 100; ++p) {
            CPoint z = random_point(rng, n, 3.0);
            CHECK(dist(apply_aut(ai, apply_aut(a, z)), z) <= 1e-10);
        }
    }
}

TEST_CASE("fixes_hyperplanes structural and sampled") {
    // Overshear(0, z2 g(z2)) fixes {z2 = 0}
    CompositeAut a;
    a.n = 2;
    a.factors = {PrimitiveAut::overshear(0, ex::mul(ex::var(0), ex::poly({cx(1), cx(1)}, ex::var(0))))};
    auto H = coord_hyperplanes(2, {1});
    CHECK(fixes_hyperplanes(a, H));

    // Shear(0, 1) moves points of {z2 = 0}
    CompositeAut b;
    b.n = 2;
    b.factors = {PrimitiveAut::shear(0, ex::cst(1.0))};
    CHECK_FALSE(fixes_hyperplanes(b, H));

    // the point-moving gadget overshear: f = z2 z3 (eps + eps z2 + eps^2 z3)
    const double eps = 0.25;
    ExprPtr f = ex::mul(ex::mul(ex::var(0), ex::var(1)),
                        ex::add({ex::cst(eps), ex::scale(eps, ex::var(0)),
                                 ex::scale(eps * eps, ex::var(1))}));
    CompositeAut c;
    c.n = 3;
    c.factors = {PrimitiveAut::overshear(0, f)};
    CHECK(fixes_hyperplanes(c, coord_hyperplanes(3, {1, 2})));

    // structural pass implies pointwise fixing on sampled H
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int s = 0; s < 500; ++s) {
        CPoint h{cx(u(rng), u(rng)), cx(u(rng), u(rng)), cx(u(rng), u(rng))};
        h[1 + (s % 2)] = 0.0;
        CHECK(dist(apply_aut(c, h), h) <= 1e-9);
    }

    HyperplaneUnion raw;
    raw.n = 2;
    raw.hyperplanes = {{{cx(1), cx(1)}, cx(0)}};
    CHECK_THROWS_AS(fixes_hyperplanes(a, raw), Error);
}

TEST_CASE("gamma_separation") {
    auto grid = default_gamma_grid();
    auto [a0, g0] = gamma_separation({{cx(0), cx(1)}, {cx(0), cx(2)}}, grid);
    CHECK(g0 == 0.0);
    CHECK(std::abs(apply_aut(a0, {cx(0), cx(2)})[1] - apply_aut(a0, {cx(0), cx(1)})[1]) ==
          doctest::Approx(1.0));

    auto [a1, g1] = gamma_separation({{cx(1), cx(1)}, {cx(2), cx(1)}}, grid);
    CHECK(g1 > 0.0);
    const cx s1 = apply_aut(a1, {cx(1), cx(1)})[1];
    const cx s2 = apply_aut(a1, {cx(2), cx(1)})[1];
    CHECK(std::abs(s1 - s2) > 1e-6);

    CHECK_THROWS_AS(gamma_separation({{cx(1), cx(1)}, {cx(1), cx(1)}}, grid), Error);
}

TEST_CASE("product_separation") {
    CHECK(product_separation({{cx(1), cx(2)}}, 0.1).factors.empty());
    CHECK(product_separation({{cx(1), cx(1)}, {cx(2), cx(3)}}, 0.1).factors.empty());

    std::vector<CPoint> pts{{cx(1), cx(1), cx(1)}, {cx(1), cx(1), cx(2)}};
    const double eps = 0.5;
    CompositeAut a = product_separation(pts, eps);
    std::vector<CPoint> img;
    for (const auto& p : pts) img.push_back(apply_aut(a, p));
    for (int m = 0; m < 3; ++m) {
        cx prod0(1.0), prod1(1.0);
        for (int i = 0; i < 3; ++i)
            if (i != m) {
                prod0 *= img[0][i];
                prod1 *= img[1][i];
            }
        CHECK(std::abs(prod0 - prod1) >= 1e-8);
    }
    for (size_t i = 0; i < pts.size(); ++i) CHECK(dist(img[i], pts[i]) <= eps);
}

TEST_CASE("apply_to_exprs matches pointwise application") {
    CompositeAut a;
    a.n = 2;
    a.factors = {PrimitiveAut::shear(1, ex::poly({cx(0.5), cx(0, 1)}, ex::var(0))),
                 PrimitiveAut::overshear(0, ex::scale(0.3, ex::var(0))),
                 PrimitiveAut::twist(0.2)};
    Eigen::MatrixXcd M(2, 2);
    M << cx(1), cx(0.5, 0.5), cx(0), cx(0, 1);
    Eigen::VectorXcd t(2);
    t << cx(1), cx(-2);
    a.factors.push_back(PrimitiveAut::affine(M, t));

    std::vector<ExprPtr> curve{ex::var(0), ex::poly({cx(1), cx(1)}, ex::var(0))};  // (t, 1+t)
    auto out = apply_to_exprs(a, curve);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const cx z(u(rng), u(rng));
        CPoint p{z, cx(1) + z};
        CPoint q = apply_aut(a, p);
        CHECK(std::abs(eval1(out[0], z) - q[0]) < 1e-11);
        CHECK(std::abs(eval1(out[1], z) - q[1]) < 1e-11);
    }
}

TEST_CASE("aut JSON round-trip") {
    CompositeAut a;
    a.n = 2;
    Eigen::MatrixXcd M(2, 2);
    M << cx(1, 0.125), cx(0), cx(0), cx(2);
    Eigen::VectorXcd t(2);
    t << cx(0.1), cx(-0.7, 1e-17);
    a.factors = {PrimitiveAut::shear(0, ex::exp(ex::var(0))),
                 PrimitiveAut::overshear(1, ex::cst(cx(0, 0.5))), PrimitiveAut::twist(0.125),
                 PrimitiveAut::affine(M, t)};
    auto back = aut_from_json(aut_to_json(a));
    CHECK(aut_to_json(back).dump() == aut_to_json(a).dump());
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        CPoint z{cx(u(rng), u(rng)), cx(u(rng), u(rng))};
        CHECK(dist(apply_aut(a, z), apply_aut(back, z)) == 0.0);
    }
}
