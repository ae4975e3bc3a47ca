#include "holo/certify.hpp"

#include <algorithm>
#include <cmath>

namespace holo {

CPoint curve_eval(const HoloCurve& c, cx t) {
    CPoint p(c.components.size());
    for (size_t i = 0; i < c.components.size(); ++i) p[i] = eval1(c.components[i], t);
    return p;
}

CPoint curve_deriv(const HoloCurve& c, cx t) {
    CPoint p(c.components.size());
    for (size_t i = 0; i < c.components.size(); ++i) p[i] = eval_deriv(c.components[i], t);
    return p;
}

json curve_to_json(const HoloCurve& c) {
    json comps = json::array();
    for (const auto& e : c.components) comps.push_back(expr_to_json(e));
    return json{{"components", comps}, {"provenance", c.provenance}, {"stages", c.stages}};
}

HoloCurve curve_from_json(const json& j) {
    HoloCurve c;
    for (const auto& e : j.at("components")) c.components.push_back(expr_from_json(e));
    c.provenance = j.value("provenance", "");
    c.stages = j.value("stages", json::array());
    if (c.components.empty()) throw Error("curve: no components");
    return c;
}

ForbiddenSet ForbiddenSet::none() { return {}; }

ForbiddenSet ForbiddenSet::of_body(ConvexBody F) {
    ForbiddenSet s;
    s.kind = Kind::Body;
    s.body = std::move(F);
    return s;
}

ForbiddenSet ForbiddenSet::of_hyperplanes(HyperplaneUnion H) {
    ForbiddenSet s;
    s.kind = Kind::Hyperplanes;
    s.hyper = std::move(H);
    return s;
}

ForbiddenSet ForbiddenSet::of_product(ConvexBody F, ConvexBody G, int k, int l) {
    ForbiddenSet s;
    s.kind = Kind::Product;
    s.left = std::move(F);
    s.right = std::move(G);
    s.k = k;
    s.l = l;
    return s;
}

static double hyperplane_distance(const HyperplaneUnion& H, const CPoint& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [normal, offset] : H.hyperplanes) {
        cx dot(0.0);
        double nrm2 = 0.0;
        for (size_t i = 0; i < normal.size(); ++i) {
            dot += normal[i] * p[i];
            nrm2 += std::norm(normal[i]);
        }
        if (nrm2 < 1e-28) continue;
        best = std::min(best, std::abs(dot - offset) / std::sqrt(nrm2));
    }
    return best;
}

double forbidden_distance(const ForbiddenSet& F, const CPoint& p) {
    switch (F.kind) {
        case ForbiddenSet::Kind::None:
            return std::numeric_limits<double>::infinity();
        case ForbiddenSet::Kind::Body:
            return point_distance(F.body, to_real(p));
        case ForbiddenSet::Kind::Hyperplanes:
            return hyperplane_distance(F.hyper, p);
        case ForbiddenSet::Kind::Product: {
            if (static_cast<int>(p.size()) != F.k + F.l)
                throw Error("forbidden_distance: dimension mismatch");
            const CPoint u(p.begin(), p.begin() + F.k);
            const CPoint v(p.begin() + F.k, p.end());
            const double du = point_distance(F.left, to_real(u));
            const double dv = point_distance(F.right, to_real(v));
            return std::hypot(du, dv);
        }
    }
    throw Error("forbidden_distance: bad kind");
}

json forbidden_to_json(const ForbiddenSet& F) {
    switch (F.kind) {
        case ForbiddenSet::Kind::None:
            return json{{"kind", "none"}};
        case ForbiddenSet::Kind::Body:
            return json{{"kind", "body"}, {"body", body_to_json(F.body)}};
        case ForbiddenSet::Kind::Hyperplanes: {
            json hs = json::array();
            for (const auto& [normal, offset] : F.hyper.hyperplanes) {
                json nr = json::array();
                for (const cx& u : normal) nr.push_back({u.real(), u.imag()});
                hs.push_back({{"normal", nr}, {"offset", {offset.real(), offset.imag()}}});
            }
            return json{{"kind", "hyperplanes"},
                        {"n", F.hyper.n},
                        {"hyperplanes", hs},
                        {"normalized", F.hyper.normalized},
                        {"coord_axes", F.hyper.coord_axes}};
        }
        case ForbiddenSet::Kind::Product:
            return json{{"kind", "product"},
                        {"k", F.k},
                        {"l", F.l},
                        {"left", body_to_json(F.left)},
                        {"right", body_to_json(F.right)}};
    }
    throw Error("forbidden_to_json: bad kind");
}

ForbiddenSet forbidden_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") return ForbiddenSet::none();
    if (kind == "body") return ForbiddenSet::of_body(body_from_json(j.at("body")));
    if (kind == "hyperplanes") {
        HyperplaneUnion H;
        H.n = j.at("n").get<int>();
        for (const auto& hj : j.at("hyperplanes")) {
            CPoint normal;
            for (const auto& u : hj.at("normal"))
                normal.emplace_back(u.at(0).get<double>(), u.at(1).get<double>());
            const auto& o = hj.at("offset");
            H.hyperplanes.emplace_back(std::move(normal),
                                       cx(o.at(0).get<double>(), o.at(1).get<double>()));
        }
        H.normalized = j.value("normalized", false);
        H.coord_axes = j.value("coord_axes", std::vector<int>{});
        return ForbiddenSet::of_hyperplanes(std::move(H));
    }
    if (kind == "product")
        return ForbiddenSet::of_product(body_from_json(j.at("left")),
                                        body_from_json(j.at("right")), j.at("k").get<int>(),
                                        j.at("l").get<int>());
    throw Error("forbidden_from_json: unknown kind " + kind);
}

bool Certificate::all_pass() const {
    for (const auto& s : sections)
        if (!s.pass) return false;
    return true;
}

const Section* Certificate::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

json certificate_to_json(const Certificate& c) {
    json sections = json::array();
    for (const auto& s : c.sections)
        sections.push_back({{"name", s.name}, {"pass", s.pass}, {"data", s.data}});
    return json{{"schema", c.schema},
                {"R_ver", c.R_ver},
                {"pass", c.all_pass()},
                {"sections", sections}};
}

Certificate certificate_from_json(const json& j) {
    Certificate c;
    c.schema = j.at("schema").get<int>();
    c.R_ver = j.at("R_ver").get<double>();
    for (const auto& sj : j.at("sections"))
        c.sections.push_back(
            {sj.at("name").get<std::string>(), sj.at("pass").get<bool>(), sj.at("data")});
    return c;
}

namespace {

double point_norm(const CPoint& p) {
    double s = 0.0;
    for (const cx& v : p) s += std::norm(v);
    return std::sqrt(s);
}

double point_gap(const CPoint& a, const CPoint& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

json grid_meta(double R, double pitch, long count) {
    return json{{"R", R}, {"pitch", pitch}, {"count", count}};
}

}  // namespace

Section check_interpolation(const HoloCurve& c, const std::vector<CurveJet>& jets) {
    Section s;
    s.name = "interpolation";
    const double thresh = 1e-8;
    json rows = json::array();
    double worst = 0.0;
    for (const auto& jet : jets) {
        for (size_t k = 0; k < jet.rows.size(); ++k) {
            const CPoint& want = jet.rows[k];
            if (static_cast<int>(want.size()) != c.n())
                throw Error("check_interpolation: row dimension mismatch");
            CPoint got(c.n());
            for (int m = 0; m < c.n(); ++m)
                got[m] = eval_jet(c.components[m], jet.alpha, static_cast<int>(k))
                             .values[k];
            const double res = point_gap(got, want) / std::max(1.0, point_norm(want));
            worst = std::max(worst, res);
            rows.push_back({{"alpha", {jet.alpha.real(), jet.alpha.imag()}},
                            {"order", k},
                            {"residual", res}});
        }
    }
    s.pass = worst <= thresh;
    s.data = json{{"rows", rows}, {"max_residual", worst}, {"threshold", thresh}};
    return s;
}

Section check_avoidance(const HoloCurve& c, const ForbiddenSet& F, double R_ver, double pitch) {
    Section s;
    s.name = "avoidance";
    const auto grid = sample_region(rg::disk(cx(0, 0), R_ver), R_ver, pitch);
    double margin = std::numeric_limits<double>::infinity();
    long overflow = 0;
    for (cx t : grid) {
        try {
            margin = std::min(margin, forbidden_distance(F, curve_eval(c, t)));
        } catch (const OverflowError&) {
            ++overflow;
        }
    }
    // Structural sub-certificate: a coordinate hyperplane {z_i = 0} is
    // avoided exactly when component i never vanishes structurally.
    bool structural = false;
    json structural_axes = json::array();
    if (F.kind == ForbiddenSet::Kind::Hyperplanes && F.hyper.normalized) {
        structural = !F.hyper.coord_axes.empty();
        for (int axis : F.hyper.coord_axes) {
            const bool ok = axis < c.n() && structurally_nonvanishing(c.components[axis]);
            structural_axes.push_back({{"axis", axis}, {"nonvanishing", ok}});
            if (!ok) structural = false;
        }
    }
    s.pass = (margin > 0.0 && overflow == 0) || structural;
    s.data = json{{"margin", std::isinf(margin) ? -1.0 : margin},
                  {"grid", grid_meta(R_ver, pitch, static_cast<long>(grid.size()))},
                  {"overflow_points", overflow},
                  {"structural", structural},
                  {"structural_axes", structural_axes}};
    return s;
}

Section check_immersion(const HoloCurve& c, double R_ver, double pitch) {
    Section s;
    s.name = "immersion";
    const double thresh = 1e-10;
    const auto grid = sample_region(rg::disk(cx(0, 0), R_ver), R_ver, pitch);
    double floor = std::numeric_limits<double>::infinity();
    long overflow = 0;
    for (cx t : grid) {
        try {
            floor = std::min(floor, point_norm(curve_deriv(c, t)));
        } catch (const OverflowError&) {
            ++overflow;
        }
    }
    s.pass = floor > thresh && overflow == 0;
    s.data = json{{"floor", std::isinf(floor) ? -1.0 : floor},
                  {"threshold", thresh},
                  {"grid", grid_meta(R_ver, pitch, static_cast<long>(grid.size()))},
                  {"overflow_points", overflow}};
    return s;
}

Section check_injectivity(const HoloCurve& c, double R_ver, int samples, unsigned seed) {
    Section s;
    s.name = "injectivity";
    if (samples < 2) throw Error("check_injectivity: need at least 2 samples");
    const double gap = 0.01, thresh = 1e-9;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-R_ver, R_ver);
    // Symmetric sample set (every t paired with -t): even curves such as
    // t -> (t^2, ...) are caught exactly, not just with random luck.
    std::vector<cx> ts;
    while (static_cast<int>(ts.size()) + 1 < samples) {
        const cx t(u(rng), u(rng));
        if (std::abs(t) > R_ver) continue;
        ts.push_back(t);
        ts.push_back(-t);
    }
    std::vector<CPoint> imgs;
    imgs.reserve(ts.size());
    long overflow = 0;
    for (cx t : ts) {
        try {
            imgs.push_back(curve_eval(c, t));
        } catch (const OverflowError&) {
            ++overflow;
            imgs.push_back(CPoint(c.n(), cx(0.0)));
        }
    }
    double min_sep = std::numeric_limits<double>::infinity();
    long pairs = 0;
    for (size_t i = 0; i < ts.size(); ++i)
        for (size_t j = i + 1; j < ts.size(); ++j) {
            if (std::abs(ts[i] - ts[j]) < gap) continue;
            ++pairs;
            min_sep = std::min(min_sep, point_gap(imgs[i], imgs[j]));
        }
    s.pass = pairs > 0 && min_sep >= thresh && overflow == 0;
    s.data = json{{"min_separation", std::isinf(min_sep) ? -1.0 : min_sep},
                  {"threshold", thresh},
                  {"parameter_gap", gap},
                  {"samples", samples},
                  {"pairs", pairs},
                  {"seed", seed},
                  {"R", R_ver},
                  {"overflow_points", overflow}};
    return s;
}

Section properness_proxy(const HoloCurve& c, std::vector<double> radii, double threshold) {
    Section s;
    s.name = "properness_proxy";
    if (radii.empty()) throw Error("properness_proxy: empty radii schedule");
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw Error("properness_proxy: radii must increase");
    const int nang = 720;
    json values = json::array();
    double final_min = 0.0;
    long overflow = 0;
    for (double R : radii) {
        double m = std::numeric_limits<double>::infinity();
        for (int a = 0; a < nang; ++a) {
            const double th = 2.0 * 3.14159265358979323846 * a / nang;
            try {
                m = std::min(m, point_norm(curve_eval(c, R * cx(std::cos(th), std::sin(th)))));
            } catch (const OverflowError&) {
                ++overflow;
            }
        }
        final_min = std::isinf(m) ? -1.0 : m;
        values.push_back({{"radius", R}, {"min_modulus", final_min}});
    }
    s.pass = final_min > threshold && overflow == 0;
    s.data = json{{"values", values},
                  {"threshold", threshold},
                  {"angular_samples", nang},
                  {"overflow_points", overflow},
                  {"disclaimer",
                   "PROXY: sampled min modulus on circles only; properness of the limit "
                   "object is out of scope"}};
    return s;
}

double lempert_witness(cx a1, cx a2, double R, bool avoidance_certified) {
    if (!avoidance_certified)
        throw Error("lempert_witness: avoidance not certified at the requested radius");
    if (!(R > 0.0)) throw Error("lempert_witness: radius must be positive");
    return std::abs(a2 - a1) / R;
}

}  // namespace holo
