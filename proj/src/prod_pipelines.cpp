#include <algorithm>
#include <cmath>
#include <random>

#include "holo/pipelines.hpp"
#include "pipeline_util.hpp"

namespace holo {

// ----------------------------------------------------------- prop6 pieces

double prop6_scan_t(double x_max, double step, double safety) {
    double t_star = 0.0;
    for (double x = 0.0; x <= x_max + 1e-12; x += step) {
        const double lhs = std::exp(std::cbrt(x) - std::pow(x + 2.0, 0.25));
        const double rhs = 4.0 * std::exp(1.0) * std::pow(x + 2.0, 4.0 / 3.0);
        // t lhs >= (1-t) rhs  <=>  t >= rhs / (lhs + rhs)
        t_star = std::max(t_star, rhs / (lhs + rhs));
    }
    return std::min(t_star * safety, 0.5 * (1.0 + t_star));
}

double prop6_t_margin(double t, double x_max, double step) {
    double margin = std::numeric_limits<double>::infinity();
    for (double x = 0.0; x <= x_max + 1e-12; x += step) {
        const double lhs = t * std::exp(std::cbrt(x) - std::pow(x + 2.0, 0.25));
        const double rhs = 4.0 * std::exp(1.0) * (1.0 - t) * std::pow(x + 2.0, 4.0 / 3.0);
        margin = std::min(margin, lhs - rhs);
    }
    return margin;
}

namespace detail {

namespace {

// Mirror combs under x -> -x (so the printed nodes -2 and 7+i7j lie inside).
RegionPtr mirror_A0(int teeth) {
    std::vector<RegionPtr> t;
    for (int j = 1; j <= teeth; ++j)
        t.push_back(rg::open_box(-1e9, -5.0, 7.0 * j - 1.0, 7.0 * j + 1.0));
    return rg::region_intersection({rg::re_le(1.0), rg::complement(rg::region_union(t))});
}

RegionPtr mirror_A(int j) {
    return rg::region_intersection(
        {rg::re_ge(3.0), rg::box(-1e9, 1e9, 7.0 * j - 3.0, 7.0 * j + 3.0)});
}

RegionPtr mirror_E0(int teeth) {
    std::vector<RegionPtr> t;
    for (int j = 1; j <= teeth; ++j)
        t.push_back(rg::open_box(-1e9, -4.0, 7.0 * j - 2.0, 7.0 * j + 2.0));
    return rg::region_intersection({rg::re_le(0.0), rg::complement(rg::region_union(t))});
}

RegionPtr mirror_E(int max_j) {
    std::vector<RegionPtr> t;
    for (int j = 1; j <= max_j; ++j)
        t.push_back(rg::box(4.0, 1e9, 7.0 * j - 2.0, 7.0 * j + 2.0));
    return rg::region_union(t);
}

cx quartic_decay_right(cx z) { return std::exp(-std::pow(z + 2.0, 0.25)); }
cx quartic_decay_left(cx z) { return std::exp(-std::pow(-z - 2.0, 0.25)); }

}  // namespace

void prop6_split(const Scene& s, std::vector<CPoint>& aPts, std::vector<CPoint>& bPts,
                 double& eps) {
    if (s.F.kind != ForbiddenSet::Kind::Product || s.F.k != s.k || s.F.l != s.l)
        throw Error("prop6: F must be a product matching the k/l split");
    if (s.targets.empty()) throw Error("prop6: needs at least one point");
    const int k = s.k, l = s.l;
    auto blocks = [&](const CPoint& c) {
        if (static_cast<int>(c.size()) != k + l)
            throw Error("prop6: point dimension mismatch");
        CPoint first(c.begin(), c.begin() + k), last(c.begin() + k, c.end());
        return std::pair(point_distance(s.F.left, to_real(first)),
                         point_distance(s.F.right, to_real(last)));
    };
    eps = s.param("eps", 0.0);
    if (eps <= 0.0) {
        eps = std::numeric_limits<double>::infinity();
        for (const auto& c : s.targets) {
            auto [d1, d2] = blocks(c);
            eps = std::min(eps, std::max(d1, d2));
        }
    }
    if (!(eps > 0.0)) throw Error("prop6: points must keep positive distance from F x G");
    aPts.clear();
    bPts.clear();
    for (const auto& c : s.targets) {
        auto [d1, d2] = blocks(c);
        if (d1 >= eps - 1e-9) {
            aPts.push_back(c);
        } else if (d2 >= eps - 1e-9) {
            bPts.push_back(c);
        } else {
            throw Error("prop6: point closer than eps to both factors");
        }
    }
    if (aPts.empty()) throw Error("prop6: C' must contain at least one point");
}

Section prop6_derivative_section(const HoloCurve& c, const Scene& s) {
    std::vector<CPoint> a, b;
    double eps = 0.0;
    prop6_split(s, a, b, eps);
    const double t = prop6_scan_t();
    const int J = static_cast<int>(s.param("J", 3.0));
    const int teeth = std::max(J, 3) + 2;
    const double R_ver = s.param("R_ver", 12.0);
    const double pitch = s.param("pitch", 0.25);
    const int k = s.k;

    const RegionPtr e0 = comb_E0(teeth), e = comb_E(teeth);
    const RegionPtr m0 = mirror_E0(teeth), me = mirror_E(teeth);

    double floor_all = std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    long overflow = 0;
    json per_m = json::array();
    for (int m = 0; m < c.n(); ++m) {
        const bool first_block = m < k;
        const RegionPtr slope_region = first_block ? e0 : m0;
        const RegionPtr box_region = first_block ? e : me;
        const cx pole = first_block ? cx(-2.0) : cx(2.0);
        double floor_m = std::numeric_limits<double>::infinity();
        for (const RegionPtr& reg : {slope_region, box_region}) {
            for (cx z : sample_region(reg, R_ver, pitch)) {
                try {
                    floor_m = std::min(floor_m, std::abs(eval_deriv(c.components[m], z)));
                } catch (const OverflowError&) {
                    ++overflow;
                }
                if (reg == slope_region) {
                    const double w = std::abs(z - pole);
                    const double lower = eps * t / (8.0 * std::pow(w, 4.0 / 3.0)) *
                                         std::exp(-std::pow(w, 0.25));
                    const double slack = 0.5 * eps * (1.0 - t) *
                                         std::exp(1.0 - std::cbrt(std::abs(z)));
                    margin = std::min(margin, lower - slack);
                }
            }
        }
        floor_all = std::min(floor_all, floor_m);
        per_m.push_back(json{{"m", m}, {"deriv_floor", floor_m}});
    }

    Section sec;
    sec.name = "derivative_floor";
    sec.pass = floor_all > 1e-12 && margin >= -1e-12 && overflow == 0;
    sec.data = json{{"floor", floor_all},
                    {"bound_margin", margin},
                    {"t", t},
                    {"eps", eps},
                    {"overflow_points", overflow},
                    {"per_component", per_m},
                    {"grid", json{{"R_ver", R_ver}, {"pitch", pitch}}}};
    return sec;
}

}  // namespace detail

PipelineResult prop6_immersion(const Scene& s) {
    std::vector<CPoint> a, b;
    double eps = 0.0;
    detail::prop6_split(s, a, b, eps);
    const int k = s.k, l = s.l;
    const double t = prop6_scan_t();
    const int J = static_cast<int>(s.param("J", 3.0));
    const int teeth = std::max(J, 3) + 2;
    const double R_ver = s.param("R_ver", 12.0);
    const bool strict = s.param("strict", 0.0) > 0.5;
    const int Ja = std::min<int>(J, static_cast<int>(a.size()) - 1);
    const int Jb = b.empty() ? -1 : std::min<int>(J, static_cast<int>(b.size()) - 1);
    const double half = 0.5 * eps;
    const double tol = half * (1.0 - t);

    json stages = json::array();
    stages.push_back(json{{"op", "setup"},
                          {"t", t},
                          {"t_margin", prop6_t_margin(t)},
                          {"eps", eps},
                          {"J", J},
                          {"split", json::array({a.size(), b.size()})}});

    std::vector<ExprPtr> comps;
    for (int m = 0; m < k + l; ++m) {
        ApproxTask task;
        task.R_fit = s.param("R_fit", R_ver);
        task.R_ver = R_ver;
        // Interpolation nodes (a at 2 / -7+7ij, b at -2 / 7+7ij).
        task.jets.push_back(Jet{cx(2.0), {a[0][m]}});
        if (!b.empty()) task.jets.push_back(Jet{cx(-2.0), {b[0][m]}});
        for (int j = 1; j <= Ja; ++j) task.jets.push_back(Jet{cx(-7.0, 7.0 * j), {a[j][m]}});
        for (int j = 1; j <= Jb; ++j) task.jets.push_back(Jet{cx(7.0, 7.0 * j), {b[j][m]}});

        // Decay clauses. Each comb region contains exactly one interpolation
        // node; the printed bump value at that node contradicts the exact
        // interpolation by the maximum principle, so the bump is corrected by
        // a unit spike u with u(node) = 1 that stays O(1) on the region and
        // decays toward its unbounded directions. The |f - a_j| < eps
        // avoidance budget survives on the part of each comb not covered by
        // the opposite-side combs.
        if (m < k) {
            const cx a0m = a[0][m];
            const double bump_node = std::exp(-std::pow(4.0, 0.25));
            task.clauses.push_back(clause_fn(
                comb_A0(teeth),
                [a0m, half, t, bump_node](cx z) {
                    return a0m + half * t *
                                     (detail::quartic_decay_right(z) -
                                      bump_node * std::exp(-(z - 2.0)));
                },
                json{{"kind", "comb_A0_decay"}, {"m", m}}, tol, 1.0 / 3.0));
            for (int j = 1; j <= Ja; ++j) {
                const cx ajm = a[j][m];
                const cx node(-7.0, 7.0 * j);
                const cx bn = detail::quartic_decay_left(node);
                task.clauses.push_back(clause_fn(
                    comb_A(j),
                    [ajm, half, t, bn, node](cx z) {
                        const cx u = std::exp(-(z - node) * (z - node) / 16.0);
                        return ajm + half * t * (detail::quartic_decay_left(z) - bn * u);
                    },
                    json{{"kind", "comb_A_decay"}, {"j", j}, {"m", m}}, tol, 1.0 / 3.0));
            }
        } else {
            if (!b.empty()) {
                const cx b0m = b[0][m];
                task.clauses.push_back(clause_fn(
                    detail::mirror_A0(teeth),
                    [b0m, half, t](cx z) {
                        // decay value at the node -2 is exactly 1
                        return b0m + half * t *
                                         (detail::quartic_decay_left(z) - std::exp(z + 2.0));
                    },
                    json{{"kind", "mirror_A0_decay"}, {"m", m}}, tol, 1.0 / 3.0));
            }
            for (int j = 1; j <= Jb; ++j) {
                const cx bjm = b[j][m];
                const cx node(7.0, 7.0 * j);
                const cx bn = detail::quartic_decay_right(node);
                task.clauses.push_back(clause_fn(
                    detail::mirror_A(j),
                    [bjm, half, t, bn, node](cx z) {
                        const cx u = std::exp(-(z - node) * (z - node) / 16.0);
                        return bjm + half * t * (detail::quartic_decay_right(z) - bn * u);
                    },
                    json{{"kind", "mirror_A_decay"}, {"j", j}, {"m", m}}, tol, 1.0 / 3.0));
            }
        }

        BasisSpec basis;
        basis.degree = static_cast<int>(s.param("degree", 12.0));
        json notes = json::object();
        auto [f, rep] = detail::relaxed_fit(task, basis, strict, notes);
        double worst = 0.0;
        for (const auto& cr : rep.clauses)
            worst = std::max(worst, cr.tol > 0 ? cr.ver_residual / cr.tol : 0.0);
        stages.push_back(json{{"op", "coordinate_fit"},
                              {"m", m},
                              {"success", rep.success},
                              {"worst_ver_ratio", worst},
                              {"escalations", rep.escalations},
                              {"notes", notes}});
        comps.push_back(f);
    }

    HoloCurve curve;
    curve.components = std::move(comps);
    curve.provenance = "prop6_immersion";
    curve.stages = std::move(stages);
    return {curve, certify_scene(curve, s), detail::scene_jets(s)};
}

// ------------------------------------------------------------- prop7_jet

namespace detail {

Section prop7_dichotomy_section(const HoloCurve& c, const Scene& s) {
    const int k = s.k, l = s.l;
    double nx = 0.0;
    for (int m = 0; m < k; ++m) nx += std::norm(s.jet_X[m]);
    const double r = std::sqrt(nx) / std::sqrt(static_cast<double>(k));
    const double R = s.param("R_ver", 12.0);
    const int samples = static_cast<int>(s.param("dich_samples", 10000.0));
    const unsigned seed = static_cast<unsigned>(s.param("seed", 2027.0));
    const double e1 = std::exp(1.0) + 1.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    long violations = 0, math_violations = 0, overflow = 0;
    for (int i = 0; i < samples; ++i) {
        const double rad = R * std::sqrt(uni(rng));
        const double th = 2.0 * kPi * uni(rng);
        const cx z(rad * std::cos(th), rad * std::sin(th));
        CPoint p;
        try {
            p = curve_eval(c, z);
        } catch (const OverflowError&) {
            ++overflow;
            ++violations;
            continue;
        }
        double d1 = 0.0;
        for (int m = 0; m < k; ++m) d1 += std::norm(p[m] - s.jet_c[m]);
        bool ok = std::sqrt(d1) <= e1 * std::sqrt(static_cast<double>(k)) + 1e-9;
        if (!ok && r > 0.0) {
            bool poly_ok = z.real() >= 1.0 / r - 1e-9;
            for (int m = 0; m < l && poly_ok; ++m)
                poly_ok = std::abs(p[k + m] - s.jet_c[k + m]) < 1.0;
            ok = poly_ok;
        }
        if (!ok) ++violations;
        if (r > 0.0 && std::abs(std::exp(r * z) - 1.0) >= e1 &&
            z.real() < 1.0 / r - 1e-12)
            ++math_violations;
    }

    Section sec;
    sec.name = "dichotomy";
    sec.pass = violations == 0 && math_violations == 0;
    sec.data = json{{"violations", violations},
                    {"implication_violations", math_violations},
                    {"overflow_points", overflow},
                    {"samples", samples},
                    {"seed", seed},
                    {"radius", R},
                    {"r", r}};
    return sec;
}

}  // namespace detail

PipelineResult prop7_jet(const Scene& s) {
    const int k = s.k, l = s.l;
    if (k < 1 || l < 1) throw Error("prop7: needs k >= 1 and l >= 1");
    if (s.F.kind != ForbiddenSet::Kind::Product || s.F.k != k || s.F.l != l)
        throw Error("prop7: F must be a product matching the k/l split");
    if (!s.has_jet || static_cast<int>(s.jet_c.size()) != k + l ||
        static_cast<int>(s.jet_X.size()) != k + l)
        throw Error("prop7: jet data (c, X) of dimension k+l required");

    CPoint cp(s.jet_c.begin(), s.jet_c.begin() + k);
    CPoint cpp(s.jet_c.begin() + k, s.jet_c.end());
    double nx = 0.0;
    for (int m = 0; m < k; ++m) nx += std::norm(s.jet_X[m]);
    const double r = std::sqrt(nx) / std::sqrt(static_cast<double>(k));
    const double d1 = point_distance(s.F.left, to_real(cp));
    const double d2 = point_distance(s.F.right, to_real(cpp));

    json stages = json::array();
    std::vector<ExprPtr> comps;
    if (r == 0.0) {
        // X' = 0: constant first block, linear last block; the product is
        // avoided outright because the first block never meets F.
        if (d1 <= 0.0) throw Error("prop7: c' lies in F");
        for (int m = 0; m < k; ++m) comps.push_back(ex::cst(cp[m]));
        for (int m = 0; m < l; ++m)
            comps.push_back(ex::poly({cpp[m], s.jet_X[k + m]}, ex::var(0)));
        stages.push_back(json{{"op", "trivial_Xprime_zero"}});
    } else {
        const double e1 = std::exp(1.0) + 1.0;
        if (d1 <= e1 * std::sqrt(static_cast<double>(k)))
            throw Error("prop7: dist(c', F) must exceed (e+1) sqrt(k)");
        if (d2 <= std::sqrt(static_cast<double>(l)))
            throw Error("prop7: dist(c'', G) must exceed sqrt(l)");
        // First block: c'_m + (X'_m / r)(e^{rz} - 1); the coefficient vector
        // has norm sqrt(k), so |first block - c'| = sqrt(k) |e^{rz} - 1|
        // exactly (the unitary-rotation normal form, applied inline).
        for (int m = 0; m < k; ++m) {
            ExprPtr w = ex::shift(ex::exp(ex::scale(cx(r), ex::var(0))), cx(-1.0));
            comps.push_back(ex::shift(ex::scale(s.jet_X[m] / r, w), cp[m]));
        }
        stages.push_back(json{{"op", "first_block"}, {"r", r}});
        const double R_ver = s.param("R_ver", 12.0);
        for (int m = 0; m < l; ++m) {
            ApproxTask task;
            task.R_fit = R_ver;
            task.R_ver = R_ver;
            task.jets = {Jet{cx(0.0), {cx(0.0), s.jet_X[k + m]}}};
            task.clauses = {clause_const(rg::re_ge(1.0 / r), cx(0.0), 0.9)};
            auto [f, rep] = solve_task_escalating(task, BasisSpec{});
            stages.push_back(json{{"op", "last_block_fit"},
                                  {"m", m},
                                  {"success", rep.success},
                                  {"ver_residual",
                                   rep.clauses.empty() ? 0.0 : rep.clauses[0].ver_residual}});
            comps.push_back(ex::shift(f, cpp[m]));
        }
    }

    HoloCurve curve;
    curve.components = std::move(comps);
    curve.provenance = "prop7_jet";
    curve.stages = std::move(stages);
    return {curve, certify_scene(curve, s), detail::scene_jets(s)};
}

}  // namespace holo
