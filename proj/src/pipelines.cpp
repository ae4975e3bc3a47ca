#include "holo/pipelines.hpp"

#include <algorithm>
#include <cmath>

#include "pipeline_util.hpp"

namespace holo {

using detail::cx_from_json;
using detail::cx_json;

// ----------------------------------------------------------------- Scene

double Scene::param(const std::string& key, double dflt) const {
    if (params.is_object() && params.contains(key) && params.at(key).is_number())
        return params.at(key).get<double>();
    return dflt;
}

json scene_to_json(const Scene& s) {
    json pts = json::array();
    for (size_t j = 0; j < s.targets.size(); ++j) {
        json p;
        if (j < s.alphas.size()) p["alpha"] = cx_json(s.alphas[j]);
        json v = json::array();
        for (cx z : s.targets[j]) v.push_back(cx_json(z));
        p["value"] = v;
        pts.push_back(p);
    }
    json j{{"pipeline", s.pipeline}, {"n", s.n},      {"k", s.k},
           {"l", s.l},               {"F", forbidden_to_json(s.F)},
           {"points", pts},          {"params", s.params}};
    if (s.has_jet) {
        json jc = json::array(), jx = json::array();
        for (cx z : s.jet_c) jc.push_back(cx_json(z));
        for (cx z : s.jet_X) jx.push_back(cx_json(z));
        j["jets"] = json{{"c", jc}, {"X", jx}};
    }
    return j;
}

Scene scene_from_json(const json& j) {
    if (!j.is_object()) throw Error("scene: expected a JSON object");
    Scene s;
    try {
        s.pipeline = j.at("pipeline").get<std::string>();
        if (j.contains("n")) s.n = j.at("n").get<int>();
        if (j.contains("k")) s.k = j.at("k").get<int>();
        if (j.contains("l")) s.l = j.at("l").get<int>();
        if (j.contains("F")) s.F = forbidden_from_json(j.at("F"));
        if (j.contains("points")) {
            for (const auto& p : j.at("points")) {
                if (p.contains("alpha")) s.alphas.push_back(cx_from_json(p.at("alpha")));
                CPoint v;
                for (const auto& z : p.at("value")) v.push_back(cx_from_json(z));
                s.targets.push_back(std::move(v));
            }
        }
        if (j.contains("jets") && !j.at("jets").is_null()) {
            s.has_jet = true;
            for (const auto& z : j.at("jets").at("c")) s.jet_c.push_back(cx_from_json(z));
            for (const auto& z : j.at("jets").at("X")) s.jet_X.push_back(cx_from_json(z));
        }
        if (j.contains("params")) s.params = j.at("params");
    } catch (const json::exception& e) {
        throw Error(std::string("scene: malformed JSON: ") + e.what());
    }
    return s;
}

json result_to_json(const PipelineResult& r) {
    json comps = json::array();
    for (const auto& c : r.curve.components) comps.push_back(expr_to_json(c));
    return json{{"curve", comps},
                {"stages", r.curve.stages},
                {"certificate", certificate_to_json(r.certificate)},
                {"provenance", r.curve.provenance}};
}

// ------------------------------------------------------- shared plumbing

namespace detail {

std::vector<CurveJet> scene_jets(const Scene& s) {
    std::vector<CurveJet> jets;
    if (s.pipeline == "prop1_line" || s.pipeline == "prop1_convex") {
        for (size_t j = 0; j < s.targets.size(); ++j)
            jets.push_back({s.alphas[j], {s.targets[j]}});
    } else if (s.pipeline == "prop7_jet") {
        jets.push_back({cx(0.0), {s.jet_c, s.jet_X}});
    } else if (s.pipeline == "prop6_immersion") {
        std::vector<CPoint> a, b;
        double eps = 0.0;
        prop6_split(s, a, b, eps);
        const int J = static_cast<int>(s.param("J", 3.0));
        jets.push_back({cx(2.0), {a[0]}});
        if (!b.empty()) jets.push_back({cx(-2.0), {b[0]}});
        for (int j = 1; j < static_cast<int>(a.size()) && j <= J; ++j)
            jets.push_back({cx(-7.0, 7.0 * j), {a[j]}});
        for (int j = 1; j < static_cast<int>(b.size()) && j <= J; ++j)
            jets.push_back({cx(7.0, 7.0 * j), {b[j]}});
    }
    return jets;
}

}  // namespace detail

Certificate certify_scene(const HoloCurve& curve, const Scene& s) {
    const double R_ver = s.param("R_ver", 12.0);
    const double pitch = s.param("pitch", 0.25);
    Certificate cert;
    cert.R_ver = R_ver;
    cert.sections.push_back(check_interpolation(curve, detail::scene_jets(s)));
    cert.sections.push_back(check_avoidance(curve, s.F, R_ver, pitch));
    if (s.pipeline == "prop1_line" || s.pipeline == "prop1_convex" ||
        s.pipeline == "prop2_initial") {
        cert.sections.push_back(check_immersion(curve, R_ver, pitch));
        cert.sections.push_back(check_injectivity(
            curve, R_ver, static_cast<int>(s.param("inj_samples", 400.0))));
    } else if (s.pipeline == "prop6_immersion") {
        cert.sections.push_back(check_immersion(curve, R_ver, pitch));
        cert.sections.push_back(detail::prop6_derivative_section(curve, s));
    } else if (s.pipeline == "prop7_jet") {
        cert.sections.push_back(detail::prop7_dichotomy_section(curve, s));
    }
    return cert;
}

PipelineResult run_pipeline(const Scene& s) {
    if (s.pipeline == "prop1_line") return prop1_line(s);
    if (s.pipeline == "prop1_convex") return prop1_convex(s);
    if (s.pipeline == "prop6_immersion") return prop6_immersion(s);
    if (s.pipeline == "prop7_jet") return prop7_jet(s);
    if (s.pipeline == "prop2_initial") {
        HoloCurve curve = prop2_initial(s.n);
        Scene sc = s;
        if (sc.F.kind == ForbiddenSet::Kind::None) {
            std::vector<int> axes(s.n);
            for (int i = 0; i < s.n; ++i) axes[i] = i;
            sc.F = ForbiddenSet::of_hyperplanes(coord_hyperplanes(s.n, axes));
        }
        return {curve, certify_scene(curve, sc), {}};
    }
    throw Error("unknown pipeline: " + s.pipeline);
}

// ------------------------------------------------------------ prop1_line

PipelineResult prop1_line(const Scene& s) {
    if (s.n != 2) throw Error("prop1_line: n must be 2");
    if (s.F.kind != ForbiddenSet::Kind::Hyperplanes || !s.F.hyper.normalized ||
        s.F.hyper.coord_axes != std::vector<int>{1})
        throw Error("prop1_line: F must be the normalized hyperplane {z2 = 0}");
    const size_t k = s.targets.size();
    if (s.alphas.size() != k) throw Error("prop1_line: alphas/points size mismatch");
    for (size_t i = 0; i < k; ++i) {
        if (s.targets[i].size() != 2) throw Error("prop1_line: points must lie in C^2");
        if (std::abs(s.targets[i][1]) < 1e-12)
            throw Error("prop1_line: target second coordinate on the forbidden hyperplane");
        for (size_t j = i + 1; j < k; ++j)
            if (std::abs(s.alphas[i] - s.alphas[j]) < 1e-9)
                throw Error("prop1_line: parameters must be pairwise distinct");
    }

    CompositeAut Gam;
    Gam.n = 2;
    double gamma = 0.0;
    if (k >= 2) {
        // Smallest gamma (by modulus) that separates the second coordinates;
        // large gamma blows up the curve doubly exponentially, so prefer the
        // gentlest working twist over the max-gap choice.
        std::vector<double> grid = default_gamma_grid();
        std::sort(grid.begin(), grid.end(),
                  [](double a, double b) { return std::abs(a) < std::abs(b); });
        bool found = false;
        for (double g : grid) {
            CompositeAut cand;
            cand.n = 2;
            if (g != 0.0) cand.factors.push_back(PrimitiveAut::twist(g));
            double gap = std::numeric_limits<double>::infinity();
            std::vector<cx> seconds;
            for (const auto& t : s.targets) seconds.push_back(apply_aut(cand, t)[1]);
            for (size_t i = 0; i < k; ++i)
                for (size_t j = i + 1; j < k; ++j)
                    gap = std::min(gap, std::abs(seconds[i] - seconds[j]));
            if (gap >= 1e-3) {
                Gam = cand;
                gamma = g;
                found = true;
                break;
            }
        }
        if (!found) std::tie(Gam, gamma) = gamma_separation(s.targets, default_gamma_grid());
    }

    std::vector<CPoint> b(k);
    for (size_t j = 0; j < k; ++j) b[j] = apply_aut(Gam, s.targets[j]);

    // Log branches: principal, then shifted toward the previous branch so the
    // interpolated exponent Q stays low-degree-friendly and deterministic.
    std::vector<cx> L(k);
    for (size_t j = 0; j < k; ++j) {
        cx raw = std::log(b[j][1]);
        if (j > 0) {
            const double turns =
                std::round((L[j - 1].imag() - raw.imag()) / (2.0 * detail::kPi));
            raw += cx(0.0, 2.0 * detail::kPi * turns);
        }
        L[j] = raw;
    }

    ExprPtr Q = ex::cst(cx(0.0));
    ExprPtr first = ex::var(0);
    if (k > 0) {
        std::vector<cx> nodes(k), vals(k), e2(k), dz(k);
        for (size_t j = 0; j < k; ++j) {
            nodes[j] = s.alphas[j];
            vals[j] = L[j];
            e2[j] = b[j][1];
            dz[j] = b[j][0] - s.alphas[j];
        }
        Q = lagrange_interpolant(nodes, vals);
        ExprPtr P = lagrange_interpolant(e2, dz);
        first = ex::add(ex::var(0), compose1(P, ex::exp(Q)));
    }
    std::vector<ExprPtr> comps = {first, ex::exp(Q)};

    HoloCurve curve;
    curve.components = apply_to_exprs(invert_aut(Gam), std::move(comps));
    curve.provenance = "prop1_line";
    curve.stages = json::array(
        {json{{"op", "gamma_separation"}, {"gamma", gamma}},
         json{{"op", "interpolation"}, {"k", k}}});

    return {curve, certify_scene(curve, s), detail::scene_jets(s)};
}

// ---------------------------------------------------------- prop1_convex

PipelineResult prop1_convex(const Scene& s) {
    if (s.n != 2) throw Error("prop1_convex: n must be 2");
    if (s.F.kind != ForbiddenSet::Kind::Body)
        throw Error("prop1_convex: F must be a convex body");
    if (classify_condition_i(s.F.body, 2) != ConvexClass::NoComplexLine)
        throw Error("prop1_convex: F must contain no complex line (condition (i))");
    const size_t k = s.targets.size();
    if (s.alphas.size() != k) throw Error("prop1_convex: alphas/points size mismatch");
    for (size_t i = 0; i < k; ++i) {
        if (s.targets[i].size() != 2) throw Error("prop1_convex: points must lie in C^2");
        if (point_distance(s.F.body, to_real(s.targets[i])) <= 0.0)
            throw Error("prop1_convex: a prescribed point lies in F");
        if (s.alphas[i].real() < 1.0)
            throw Error("prop1_convex: requires Re alpha_j >= 1");
        for (size_t j = i + 1; j < k; ++j)
            if (std::abs(s.alphas[i] - s.alphas[j]) < 1e-9)
                throw Error("prop1_convex: parameters must be pairwise distinct");
    }

    json stageslog = json::array();
    CompositeAut Psi;
    Psi.n = 2;
    std::vector<CPoint> pts = s.targets;
    ConvexBody outer = s.F.body;

    auto push_affine = [&](const AffineMap& T) {
        Psi.factors.push_back(PrimitiveAut::affine(T.M, T.t));
        for (auto& p : pts) p = T.apply(p);
        outer = affine_image(outer, T.M, T.t);
    };

    // Separation induction: one shear per point while the hull of the points
    // still meets the (outer estimate of the image of) F.
    for (size_t j = 0; j < k; ++j) {
        if (!detail::hull_intersects(outer, pts)) {
            stageslog.push_back(json{{"op", "separation"}, {"status", "hull clear"}});
            break;
        }
        // z1-functional: F away from the hull of the already-processed
        // points (the induction invariant); z2-functional: F away from the
        // point being processed.
        std::vector<CPoint> done(pts.begin(), pts.begin() + j);
        if (done.empty()) done = {pts[j]};
        push_affine(normalize_separation(outer, done, {pts[j]}));
        const double eps =
            std::min(1.0, point_distance(outer, to_real(pts[j])));
        if (eps <= 0.0)
            throw Error("prop1_convex: point entered the working hull of F");
        const cx p1 = pts[j][0], p2 = pts[j][1];

        // Exact step shear: f = p1 + w with w a damped exponential that
        // cancels p1 exactly at z2 = p2 and is below min(1/4, eps/2) on the
        // half-plane Re z2 <= -1 containing the working body.  This keeps the
        // processed point fixed exactly while translating F by p1 up to a
        // certified deviation.
        const double delta = std::min(0.25, 0.5 * eps);
        double Rstage = std::max(8.0, std::abs(p2) + 1.0);
        std::vector<cx> z2samples = detail::body_coord_samples(outer, 1, 120, 17);
        for (cx z2 : z2samples) Rstage = std::max(Rstage, 1.1 * std::abs(z2));
        detail::Damped w =
            detail::damped_interpolant({p2}, {-p1}, 0.0, -1.0, Rstage, delta);
        ExprPtr f = ex::add(ex::cst(p1), w.f);

        PrimitiveAut S = PrimitiveAut::shear(0, f);
        Psi.factors.push_back(S);
        for (auto& p : pts) p = apply_primitive(S, p);

        double dev = 0.0;
        for (cx z2 : z2samples) {
            try {
                dev = std::max(dev, std::abs(eval1(f, z2) - p1));
            } catch (const OverflowError&) {
                throw Error("prop1_convex: stage shear overflows on the body estimate");
            }
        }
        Eigen::VectorXd tr = Eigen::VectorXd::Zero(4);
        tr(0) = p1.real();
        tr(1) = p1.imag();
        outer = inflate_block(translate_body(outer, tr), 1.1 * dev + 1e-9, 0, 2);
        stageslog.push_back(json{{"op", "stage_shear"},
                                 {"point", j},
                                 {"eps", eps},
                                 {"lambda", w.lambda},
                                 {"bound", w.bound},
                                 {"deviation", dev}});
    }

    // Main normalization: F into {Re z1 <= -1, Re z2 <= -1}, points into
    // {Re z1 >= 0} and {Re z2 >= 0}. With no points, normalize against a
    // synthesized exterior anchor; the h == 0 graph then avoids F anyway.
    std::vector<CPoint> anchor = pts;
    if (pts.empty()) {
        const Eigen::VectorXd c0 = cheb_center(outer);
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(4);
        dir(0) = 1.0;
        Eigen::VectorXd x = c0;
        for (double step = 1.0; point_distance(outer, x) < 1.0 && step < 1e12; step *= 2.0)
            x = c0 + step * dir;
        if (point_distance(outer, x) < 1.0)
            throw Error("prop1_convex: no exterior anchor found (F unbounded in z1?)");
        anchor = {from_real(x)};
    }
    push_affine(normalize_separation(outer, anchor, anchor));
    stageslog.push_back(json{{"op", "normalize_separation"}});

    // The g-shear needs pairwise distinct second coordinates.  If the
    // normalization collapsed them, mix mu*z1 into z2: on F both real parts
    // are <= -1 so the mixed row stays <= -1, and on the points both are
    // >= 0, so the half-plane invariants survive.
    if (k >= 2) {
        auto min_gap = [&]() {
            double gap = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < k; ++i)
                for (size_t j = i + 1; j < k; ++j)
                    gap = std::min(gap, std::abs(pts[i][1] - pts[j][1]));
            return gap;
        };
        if (min_gap() < 1e-6) {
            for (double mu : {0.0625, 0.125, 0.25, 0.5, 1.0}) {
                Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(2, 2);
                M(1, 0) = mu;
                AffineMap mix{M, Eigen::VectorXcd::Zero(2)};
                std::vector<CPoint> trial = pts;
                for (auto& p : trial) p = mix.apply(p);
                double gap = std::numeric_limits<double>::infinity();
                for (size_t i = 0; i < k; ++i)
                    for (size_t j = i + 1; j < k; ++j)
                        gap = std::min(gap, std::abs(trial[i][1] - trial[j][1]));
                if (gap >= 1e-6) {
                    push_affine(mix);
                    stageslog.push_back(json{{"op", "mix_second"}, {"mu", mu}});
                    break;
                }
            }
        }
    }

    const double R_ver = s.param("R_ver", 12.0);
    double maxmod = 0.0;
    for (const auto& p : pts) maxmod = std::max({maxmod, std::abs(p[0]), std::abs(p[1])});
    for (cx a : s.alphas) maxmod = std::max(maxmod, std::abs(a));
    const double Rbig = std::max(R_ver + 2.0, maxmod + 2.0);

    ExprPtr h = ex::cst(cx(0.0));
    if (k > 0) {
        std::vector<cx> nodes(k), vals(k);
        for (size_t j = 0; j < k; ++j) {
            nodes[j] = pts[j][1];
            vals[j] = s.alphas[j] - pts[j][0];
            for (size_t i = 0; i < j; ++i)
                if (std::abs(nodes[i] - nodes[j]) < 1e-9)
                    throw Error("prop1_convex: second coordinates collide after normalization");
        }
        detail::Damped g = detail::damped_interpolant(nodes, vals, 0.0, -1.0, Rbig, 0.5);
        PrimitiveAut G = PrimitiveAut::shear(0, g.f);
        Psi.factors.push_back(G);
        for (auto& p : pts) p = apply_primitive(G, p);
        stageslog.push_back(json{{"op", "g_shear"}, {"lambda", g.lambda}, {"bound", g.bound}});

        std::vector<cx> hvals(k);
        for (size_t j = 0; j < k; ++j) hvals[j] = pts[j][1];
        detail::Damped dh = detail::damped_interpolant(s.alphas, hvals, 1.0, 0.0, Rbig, 0.5);
        h = dh.f;
        stageslog.push_back(json{{"op", "h_graph"}, {"lambda", dh.lambda}, {"bound", dh.bound}});
    } else {
        stageslog.push_back(json{{"op", "h_graph"}, {"degenerate", true}});
    }

    HoloCurve curve;
    curve.components = apply_to_exprs(invert_aut(Psi), {ex::var(0), h});
    curve.provenance = "prop1_convex";
    curve.stages = std::move(stageslog);

    return {curve, certify_scene(curve, s), detail::scene_jets(s)};
}

// ---------------------------------------------------------- prop2_initial

HoloCurve prop2_initial(int n) {
    if (n < 2) throw Error("prop2_initial: n must be >= 2");
    HoloCurve c;
    c.components.push_back(
        ex::exp(ex::neg(ex::poly({cx(0.0), cx(0.0), cx(1.0)}, ex::var(0)))));
    c.components.push_back(ex::exp(ex::scale(cx(-std::sqrt(2.0)), ex::var(0))));
    for (int i = 2; i < n; ++i) c.components.push_back(ex::exp(ex::var(0)));
    c.provenance = "prop2_initial";
    return c;
}

}  // namespace holo
