#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "holo/expr.hpp"
#include "holo/interp.hpp"
#include "holo/lp.hpp"

using namespace holo;

namespace {

// Independent derivative oracle: Cauchy integral on a circle of radius rho,
// 256-point trapezoid, evaluating f through std::exp/std::pow directly.
template <class F>
cx cauchy_deriv(F f, cx z0, int k, double rho = 0.5) {
    const int m = 256;
    cx acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * j / m;
        const cx w = rho * std::exp(cx(0.0, th));
        acc += f(z0 + w) / std::pow(w, k);
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return acc * fact / static_cast<double>(m);
}

cx fd_deriv(const ExprPtr& e, cx z, double h = 1e-5) {
    return (eval1(e, z + h) - eval1(e, z - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("eval_expr basics") {
    const double r = 1.7;
    auto f = ex::add(ex::exp(ex::mul(ex::cst(r), ex::var(0))), ex::cst(-1.0));
    CHECK(std::abs(eval1(f, 0.0)) == 0.0);

    CHECK(eval1(ex::cst(cx(5, 2)), cx(9, 9)) == cx(5, 2));

    auto p = ex::poly({cx(1.0), cx(1.0)}, ex::var(0));
    CHECK(eval1(p, cx(0, 1)) == cx(1, 1));
}

TEST_CASE("eval_expr arity and overflow") {
    auto two_var = ex::mul(ex::var(0), ex::var(1));
    std::vector<cx> one{cx(1.0)};
    CHECK_THROWS_AS(eval_expr(two_var, one), Error);

    auto big = ex::exp(ex::cst(800.0));
    CHECK_THROWS_AS(eval1(big, 0.0), OverflowError);
    try {
        eval1(big, 0.0);
    } catch (const OverflowError& e) {
        CHECK(!e.node_path.empty());
    }
}

TEST_CASE("eval_jet matches known derivatives") {
    const double r = 2.25;
    auto f = ex::add(ex::exp(ex::scale(r, ex::var(0))), ex::cst(-1.0));
    auto j = eval_jet(f, 0.0, 1);
    CHECK(std::abs(j.values[0]) < 1e-15);
    CHECK(std::abs(j.values[1] - r) < 1e-12);

    auto c = eval_jet(ex::cst(cx(3, -1)), cx(1, 1), 2);
    CHECK(c.values[0] == cx(3, -1));
    CHECK(c.values[1] == cx(0.0));
    CHECK(c.values[2] == cx(0.0));
}

TEST_CASE("jet order 0 equals eval and order 1 matches finite differences") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cx> coef(7);
    for (auto& c : coef) c = cx(u(rng), u(rng));
    auto p = ex::poly(coef, ex::var(0));
    auto e1 = ex::exp(ex::scale(cx(0.3, 0.2), ex::var(0)));
    auto e2 = ex::mul(p, e1);
    auto e3 = ex::neg(ex::add(p, ex::exp(ex::poly({cx(0), cx(0), cx(0.5)}, ex::var(0)))));
    for (const auto& e : {p, e1, e2, e3}) {
        for (int i = 0; i < 100; ++i) {
            const cx z(2.0 * u(rng), 2.0 * u(rng));
            auto jet = eval_jet(e, z, 1);
            CHECK(jet.values[0] == eval1(e, z));
            const cx fd = fd_deriv(e, z);
            CHECK(std::abs(jet.values[1] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("high-order jets match the Cauchy-integral oracle") {
    // f(z) = exp(z^2)
    auto f = ex::exp(ex::poly({cx(0), cx(0), cx(1)}, ex::var(0)));
    const cx z0(0.3, 0.1);
    auto jet = eval_jet(f, z0, 4);
    for (int k = 0; k <= 4; ++k) {
        const cx ref = cauchy_deriv([](cx z) { return std::exp(z * z); }, z0, k);
        CHECK(std::abs(jet.values[k] - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("subst composes expressions") {
    auto f = ex::poly({cx(1), cx(2), cx(3)}, ex::var(0));  // 1 + 2w + 3w^2
    auto g = ex::exp(ex::var(0));
    auto fg = compose1(f, g);
    const cx z(0.4, -0.2);
    const cx w = std::exp(z);
    CHECK(std::abs(eval1(fg, z) - (cx(1) + cx(2) * w + cx(3) * w * w)) < 1e-13);
}

TEST_CASE("structural predicates") {
    CHECK(structurally_nonvanishing(ex::exp(ex::var(0))));
    CHECK(structurally_nonvanishing(ex::cst(2.0)));
    CHECK(structurally_nonvanishing(ex::mul(ex::cst(2.0), ex::exp(ex::var(0)))));
    CHECK_FALSE(structurally_nonvanishing(ex::var(0)));
    CHECK_FALSE(structurally_nonvanishing(ex::cst(0.0)));

    auto f = ex::mul(ex::var(0), ex::exp(ex::var(1)));
    CHECK(vanishes_on_var(f, 0));
    CHECK_FALSE(vanishes_on_var(f, 1));
    CHECK(vanishes_on_var(ex::neg(f), 0));
}

TEST_CASE("expr JSON round-trips bit-exactly") {
    auto e = ex::add(ex::exp(ex::scale(cx(0.1, -0.7), ex::var(0))),
                     ex::poly({cx(1e-17, 3.0), cx(0.25)}, ex::neg(ex::var(0))));
    const json j1 = expr_to_json(e);
    auto back = expr_from_json(j1);
    CHECK(expr_to_json(back).dump() == j1.dump());
    const cx z(1.3, -0.4);
    CHECK(eval1(e, z) == eval1(back, z));
}

TEST_CASE("lagrange interpolation") {
    auto lin = lagrange_interpolant({cx(2), cx(-2)}, {cx(1), cx(0)});
    CHECK(std::abs(eval1(lin, 2.0) - 1.0) < 1e-12);
    CHECK(std::abs(eval1(lin, -2.0)) < 1e-12);
    CHECK(std::abs(eval1(lin, 6.0) - 2.0) < 1e-12);  // (z+2)/4

    auto c = lagrange_interpolant({cx(7)}, {cx(3)});
    CHECK(std::abs(eval1(c, 100.0) - 3.0) < 1e-15);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cx> nodes, vals;
    for (int i = 0; i < 5; ++i) {
        nodes.push_back(0.8 * std::exp(cx(0, 2.0 * std::numbers::pi * i / 5.0)));
        vals.push_back(cx(u(rng), u(rng)));
    }
    auto p = lagrange_interpolant(nodes, vals);
    double vmax = 0.0;
    for (const auto& v : vals) vmax = std::max(vmax, std::abs(v));
    for (size_t i = 0; i < nodes.size(); ++i)
        CHECK(std::abs(eval1(p, nodes[i]) - vals[i]) <= 1e-10 * vmax);

    CHECK_THROWS_AS(lagrange_interpolant({cx(1), cx(1.0 + 1e-14)}, {cx(0), cx(1)}), Error);
    std::vector<cx> many(70), mv(70);
    for (int i = 0; i < 70; ++i) many[i] = cx(i, 0);
    CHECK_THROWS_AS(lagrange_interpolant(many, mv), Error);
}

TEST_CASE("hermite interpolation hits jets") {
    Jet j1{cx(0), {cx(1), cx(2)}};
    Jet j2{cx(1), {cx(3)}};
    auto p = hermite_interpolant({j1, j2});
    auto at0 = eval_jet(p, 0.0, 1);
    CHECK(std::abs(at0.values[0] - cx(1)) < 1e-12);
    CHECK(std::abs(at0.values[1] - cx(2)) < 1e-12);
    CHECK(std::abs(eval1(p, 1.0) - cx(3)) < 1e-12);
}

TEST_CASE("hermite reconstructs a known polynomial") {
    std::vector<cx> coef{cx(1, 1), cx(-2, 0.5), cx(0, 3), cx(4)};
    auto p = ex::poly(coef, ex::var(0));
    Jet a = eval_jet(p, cx(0.5, -0.5), 2);
    Jet b = eval_jet(p, cx(-1, 0.25), 0);
    auto rec = hermite_coefficients({a, b});
    REQUIRE(rec.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rec[i] - coef[i]) < 1e-9);
}

TEST_CASE("simplex solves small LPs") {
    {
        lp::Problem p;
        p.c = {-1.0, -1.0};
        p.signs = {lp::VarSign::NonNeg, lp::VarSign::NonNeg};
        p.add_row({1.0, 1.0}, 1.0, lp::RowType::LE);
        auto r = lp::solve(p);
        REQUIRE(r.status == lp::Status::Optimal);
        CHECK(std::abs(r.objective + 1.0) < 1e-9);
    }
    {
        lp::Problem p;  // infeasible
        p.c = {0.0};
        p.signs = {lp::VarSign::NonNeg};
        p.add_row({1.0}, -1.0, lp::RowType::LE);
        CHECK(lp::solve(p).status == lp::Status::Infeasible);
    }
    {
        lp::Problem p;  // unbounded
        p.c = {-1.0};
        p.signs = {lp::VarSign::NonNeg};
        CHECK(lp::solve(p).status == lp::Status::Unbounded);
    }
    {
        lp::Problem p;  // equality with a free variable
        p.c = {1.0};
        p.signs = {lp::VarSign::Free};
        p.add_row({1.0}, 3.0, lp::RowType::EQ);
        auto r = lp::solve(p);
        REQUIRE(r.status == lp::Status::Optimal);
        CHECK(std::abs(r.x[0] - 3.0) < 1e-9);
    }
    {
        lp::Problem p;  // redundant duplicated row
        p.c = {-2.0, -3.0};
        p.signs = {lp::VarSign::NonNeg, lp::VarSign::NonNeg};
        p.add_row({1.0, 1.0}, 4.0, lp::RowType::LE);
        p.add_row({1.0, 1.0}, 4.0, lp::RowType::LE);
        p.add_row({0.0, 1.0}, 2.0, lp::RowType::LE);
        auto r = lp::solve(p);
        REQUIRE(r.status == lp::Status::Optimal);
        CHECK(std::abs(r.objective + 10.0) < 1e-8);  // x=(2,2)
    }
}
