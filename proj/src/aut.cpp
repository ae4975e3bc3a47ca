#include "holo/aut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace holo {

namespace {

cx exp_checked(cx w) {
    if (w.real() > kExpRealCap) throw OverflowError("aut.exp");
    return std::exp(w);
}

std::vector<cx> others_of(const CPoint& z, int axis) {
    std::vector<cx> o;
    o.reserve(z.size() - 1);
    for (int i = 0; i < static_cast<int>(z.size()); ++i)
        if (i != axis) o.push_back(z[i]);
    return o;
}

json cx_json(cx c) { return json::array({c.real(), c.imag()}); }
cx cx_from(const json& j) { return cx(j.at(0).get<double>(), j.at(1).get<double>()); }

}  // namespace

PrimitiveAut PrimitiveAut::affine(Eigen::MatrixXcd M, Eigen::VectorXcd t) {
    if (M.rows() != M.cols() || M.rows() != t.size()) throw Error("affine shape mismatch");
    if (std::abs(M.fullPivLu().determinant()) <= 1e-12) throw Error("affine matrix singular");
    PrimitiveAut a;
    a.kind = Kind::Affine;
    a.matrix = std::move(M);
    a.translation = std::move(t);
    return a;
}

PrimitiveAut PrimitiveAut::shear(int axis, ExprPtr f) {
    if (axis < 0 || !f) throw Error("bad shear");
    PrimitiveAut a;
    a.kind = Kind::Shear;
    a.axis = axis;
    a.f = std::move(f);
    return a;
}

PrimitiveAut PrimitiveAut::overshear(int axis, ExprPtr f) {
    if (axis < 0 || !f) throw Error("bad overshear");
    PrimitiveAut a;
    a.kind = Kind::Overshear;
    a.axis = axis;
    a.f = std::move(f);
    return a;
}

PrimitiveAut PrimitiveAut::twist(double gamma) {
    PrimitiveAut a;
    a.kind = Kind::Twist;
    a.gamma = gamma;
    return a;
}

CPoint apply_primitive(const PrimitiveAut& a, const CPoint& z) {
    const int n = static_cast<int>(z.size());
    switch (a.kind) {
        case PrimitiveAut::Kind::Affine: {
            if (a.matrix.rows() != n) throw Error("affine dimension mismatch");
            CPoint out(n);
            for (int i = 0; i < n; ++i) {
                cx s = a.translation(i);
                for (int j = 0; j < n; ++j) s += a.matrix(i, j) * z[j];
                out[i] = s;
            }
            return out;
        }
        case PrimitiveAut::Kind::Shear: {
            if (a.axis >= n) throw Error("shear axis out of range");
            CPoint out = z;
            const auto o = others_of(z, a.axis);
            out[a.axis] += eval_expr(a.f, o);
            return out;
        }
        case PrimitiveAut::Kind::Overshear: {
            if (a.axis >= n) throw Error("overshear axis out of range");
            CPoint out = z;
            const auto o = others_of(z, a.axis);
            out[a.axis] *= exp_checked(eval_expr(a.f, o));
            return out;
        }
        case PrimitiveAut::Kind::Twist: {
            if (n != 2) throw Error("twist needs n = 2");
            const cx w = a.gamma * z[0] * z[1];
            return {z[0] * exp_checked(w), z[1] * exp_checked(-w)};
        }
    }
    throw Error("unreachable primitive kind");
}

CPoint apply_aut(const CompositeAut& a, const CPoint& z) {
    CPoint p = z;
    for (const auto& f : a.factors) p = apply_primitive(f, p);
    return p;
}

CompositeAut invert_aut(const CompositeAut& a) {
    CompositeAut inv;
    inv.n = a.n;
    inv.factors.reserve(a.factors.size());
    for (auto it = a.factors.rbegin(); it != a.factors.rend(); ++it) {
        switch (it->kind) {
            case PrimitiveAut::Kind::Affine: {
                Eigen::MatrixXcd Mi = it->matrix.fullPivLu().inverse();
                inv.factors.push_back(
                    PrimitiveAut::affine(Mi, Eigen::VectorXcd(-(Mi * it->translation))));
                break;
            }
            case PrimitiveAut::Kind::Shear:
                inv.factors.push_back(PrimitiveAut::shear(it->axis, ex::neg(it->f)));
                break;
            case PrimitiveAut::Kind::Overshear:
                inv.factors.push_back(PrimitiveAut::overshear(it->axis, ex::neg(it->f)));
                break;
            case PrimitiveAut::Kind::Twist:
                // z1 z2 is invariant under the twist, so negating gamma inverts it.
                inv.factors.push_back(PrimitiveAut::twist(-it->gamma));
                break;
        }
    }
    return inv;
}

CompositeAut compose_aut(const CompositeAut& a, const CompositeAut& b) {
    if (a.n != b.n) throw Error("composing automorphisms of different dimension");
    CompositeAut c;
    c.n = a.n;
    c.factors = a.factors;
    c.factors.insert(c.factors.end(), b.factors.begin(), b.factors.end());
    return c;
}

std::vector<ExprPtr> apply_to_exprs(const CompositeAut& a, std::vector<ExprPtr> comps) {
    const int n = static_cast<int>(comps.size());
    if (n != a.n) throw Error("component count != automorphism dimension");
    for (const auto& fac : a.factors) {
        switch (fac.kind) {
            case PrimitiveAut::Kind::Affine: {
                std::vector<ExprPtr> out(n);
                for (int i = 0; i < n; ++i) {
                    std::vector<ExprPtr> terms;
                    for (int j = 0; j < n; ++j)
                        if (fac.matrix(i, j) != cx(0.0))
                            terms.push_back(ex::scale(fac.matrix(i, j), comps[j]));
                    ExprPtr s = terms.empty() ? ex::cst(0.0) : ex::add(std::move(terms));
                    out[i] = ex::shift(s, fac.translation(i));
                }
                comps = std::move(out);
                break;
            }
            case PrimitiveAut::Kind::Shear: {
                std::vector<ExprPtr> o;
                for (int i = 0; i < n; ++i)
                    if (i != fac.axis) o.push_back(comps[i]);
                comps[fac.axis] = ex::add(comps[fac.axis], subst(fac.f, o));
                break;
            }
            case PrimitiveAut::Kind::Overshear: {
                std::vector<ExprPtr> o;
                for (int i = 0; i < n; ++i)
                    if (i != fac.axis) o.push_back(comps[i]);
                comps[fac.axis] = ex::mul(comps[fac.axis], ex::exp(subst(fac.f, o)));
                break;
            }
            case PrimitiveAut::Kind::Twist: {
                if (n != 2) throw Error("twist needs n = 2");
                ExprPtr w = ex::scale(fac.gamma, ex::mul(comps[0], comps[1]));
                comps = {ex::mul(comps[0], ex::exp(w)),
                         ex::mul(comps[1], ex::exp(ex::neg(w)))};
                break;
            }
        }
    }
    return comps;
}

HyperplaneUnion coord_hyperplanes(int n, std::vector<int> axes) {
    // The "at most n-1 hyperplanes" restriction belongs to the point-moving
    // construction, which validates it itself; the union type also serves
    // avoidance certificates against all n coordinate hyperplanes.
    if (static_cast<int>(axes.size()) > n) throw Error("too many hyperplanes");
    HyperplaneUnion H;
    H.n = n;
    H.normalized = true;
    for (int a : axes) {
        if (a < 0 || a >= n) throw Error("hyperplane axis out of range");
        CPoint normal(n, cx(0.0));
        normal[a] = cx(1.0);
        H.hyperplanes.emplace_back(std::move(normal), cx(0.0));
    }
    H.coord_axes = std::move(axes);
    return H;
}

bool on_hyperplanes(const HyperplaneUnion& H, const CPoint& p, double tol) {
    for (const auto& [normal, offset] : H.hyperplanes) {
        cx s = -offset;
        for (size_t i = 0; i < p.size(); ++i) s += normal[i] * p[i];
        if (std::abs(s) <= tol) return true;
    }
    return false;
}

namespace {

bool fixes_structurally(const PrimitiveAut& fac, const HyperplaneUnion& H) {
    switch (fac.kind) {
        case PrimitiveAut::Kind::Shear:
            for (int i : H.coord_axes) {
                if (i == fac.axis) return false;
                if (!vanishes_on_var(fac.f, shear_var_index(fac.axis, i))) return false;
            }
            return true;
        case PrimitiveAut::Kind::Overshear:
            // {z_axis = 0} itself is fixed pointwise (0 times anything is 0),
            // so only the other listed axes constrain f.
            for (int i : H.coord_axes)
                if (i != fac.axis && !vanishes_on_var(fac.f, shear_var_index(fac.axis, i)))
                    return false;
            return true;
        case PrimitiveAut::Kind::Twist:
            // gamma z1 z2 vanishes on either coordinate hyperplane of C^2.
            return H.n == 2;
        case PrimitiveAut::Kind::Affine:
            return fac.matrix.isIdentity(0.0) && fac.translation.isZero(0.0);
    }
    return false;
}

}  // namespace

bool fixes_hyperplanes(const CompositeAut& a, const HyperplaneUnion& H) {
    if (!H.normalized) throw Error("hyperplane union not normalized");
    if (a.n != H.n) throw Error("dimension mismatch");
    bool structural = true;
    for (const auto& fac : a.factors)
        if (!fixes_structurally(fac, H)) {
            structural = false;
            break;
        }
    if (structural) return true;
    // Sampling fallback: 200 points per hyperplane must be fixed to 1e-9.
    for (int axis : H.coord_axes) {
        std::mt19937_64 rng(12345u + static_cast<unsigned>(axis));
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int s = 0; s < 200; ++s) {
            CPoint h(a.n);
            for (int i = 0; i < a.n; ++i) h[i] = (i == axis) ? cx(0.0) : cx(u(rng), u(rng));
            CPoint img;
            try {
                img = apply_aut(a, h);
            } catch (const OverflowError&) {
                return false;
            }
            for (int i = 0; i < a.n; ++i)
                if (std::abs(img[i] - h[i]) > 1e-9) return false;
        }
    }
    return true;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> g{0.0};
    for (int i = 0; i < 64; ++i)
        g.push_back(std::pow(10.0, -4.0 + 5.0 * static_cast<double>(i) / 63.0));
    return g;
}

std::pair<CompositeAut, double> gamma_separation(const std::vector<CPoint>& points,
                                                 const std::vector<double>& candidates) {
    if (candidates.empty()) throw Error("gamma_separation: empty candidate grid");
    for (const auto& p : points)
        if (p.size() != 2) throw Error("gamma_separation needs n = 2");
    double best_gap = -1.0, best_gamma = 0.0;
    for (double g : candidates) {
        CompositeAut a;
        a.n = 2;
        a.factors = {PrimitiveAut::twist(g)};
        double gap = std::numeric_limits<double>::infinity();
        bool ok = true;
        std::vector<cx> seconds;
        for (const auto& p : points) {
            try {
                seconds.push_back(apply_aut(a, p)[1]);
            } catch (const OverflowError&) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (size_t i = 0; i + 1 < seconds.size(); ++i)
            for (size_t j = i + 1; j < seconds.size(); ++j)
                gap = std::min(gap, std::abs(seconds[i] - seconds[j]));
        if (points.size() < 2) gap = std::numeric_limits<double>::infinity();
        if (gap > best_gap + 1e-15) {  // ties keep the earlier (smaller) gamma
            best_gap = gap;
            best_gamma = g;
        }
    }
    if (best_gap < 1e-6) throw Error("gamma_separation: no candidate separates the points");
    CompositeAut a;
    a.n = 2;
    a.factors = {PrimitiveAut::twist(best_gamma)};
    return {a, best_gamma};
}

namespace {

// Product of the coordinates of p excluding index m.
cx subset_product(const CPoint& p, int m) {
    cx prod(1.0);
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (i != m) prod *= p[i];
    return prod;
}

double subset_gap(const std::vector<CPoint>& pts, int m) {
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            gap = std::min(gap, std::abs(subset_product(pts[i], m) - subset_product(pts[j], m)));
    return gap;
}

// f(z_others) = (prod of others) * (eps + sum_k eps^{k+1} z_k), arity n-1.
ExprPtr separation_f(int n, double eps) {
    std::vector<ExprPtr> prod;
    for (int k = 0; k < n - 1; ++k) prod.push_back(ex::var(k));
    std::vector<ExprPtr> affine{ex::cst(eps)};
    double c = eps;
    for (int k = 0; k < n - 1; ++k) {
        c *= eps;
        affine.push_back(ex::scale(c, ex::var(k)));
    }
    prod.push_back(ex::add(std::move(affine)));
    return ex::mul(std::move(prod));
}

}  // namespace

CompositeAut product_separation(const std::vector<CPoint>& points, double eps) {
    if (points.empty()) throw Error("product_separation: no points");
    const int n = static_cast<int>(points[0].size());
    if (n < 2) throw Error("product_separation needs n >= 2");
    constexpr double kGap = 1e-8;
    double eps_w = 1.0;
    for (int attempt = 0; attempt <= 60; ++attempt, eps_w *= 0.5) {
        CompositeAut a;
        a.n = n;
        std::vector<CPoint> img = points;
        bool overflow = false;
        for (int m = 0; m < n && !overflow; ++m) {  // one pass per size-(n-1) subset
            if (subset_gap(img, m) >= kGap) continue;
            const int axis = (m + 1) % n;
            PrimitiveAut os = PrimitiveAut::overshear(axis, separation_f(n, eps_w));
            a.factors.push_back(os);
            for (auto& p : img) {
                try {
                    p = apply_primitive(os, p);
                } catch (const OverflowError&) {
                    overflow = true;
                    break;
                }
            }
        }
        if (overflow) continue;
        bool separated = true;
        for (int m = 0; m < n; ++m)
            if (subset_gap(img, m) < kGap) separated = false;
        double disp = 0.0;
        for (size_t i = 0; i < points.size(); ++i)
            for (int c = 0; c < n; ++c) disp = std::max(disp, std::abs(img[i][c] - points[i][c]));
        if (separated && disp <= eps) return a;
    }
    throw Error("product_separation: could not separate within the displacement budget");
}

json aut_to_json(const CompositeAut& a) {
    json factors = json::array();
    for (const auto& f : a.factors) {
        json jf;
        switch (f.kind) {
            case PrimitiveAut::Kind::Affine: {
                jf["kind"] = "affine";
                json M = json::array();
                for (int i = 0; i < f.matrix.rows(); ++i) {
                    json row = json::array();
                    for (int j = 0; j < f.matrix.cols(); ++j) row.push_back(cx_json(f.matrix(i, j)));
                    M.push_back(std::move(row));
                }
                jf["matrix"] = std::move(M);
                json t = json::array();
                for (int i = 0; i < f.translation.size(); ++i) t.push_back(cx_json(f.translation(i)));
                jf["translation"] = std::move(t);
                break;
            }
            case PrimitiveAut::Kind::Shear:
            case PrimitiveAut::Kind::Overshear:
                jf["kind"] = f.kind == PrimitiveAut::Kind::Shear ? "shear" : "overshear";
                jf["axis"] = f.axis;
                jf["f"] = expr_to_json(f.f);
                break;
            case PrimitiveAut::Kind::Twist:
                jf["kind"] = "twist";
                jf["gamma"] = f.gamma;
                break;
        }
        factors.push_back(std::move(jf));
    }
    return json{{"n", a.n}, {"factors", std::move(factors)}};
}

CompositeAut aut_from_json(const json& j) {
    CompositeAut a;
    a.n = j.at("n").get<int>();
    for (const auto& jf : j.at("factors")) {
        const std::string kind = jf.at("kind").get<std::string>();
        if (kind == "affine") {
            const auto& M = jf.at("matrix");
            const int n = static_cast<int>(M.size());
            Eigen::MatrixXcd mat(n, n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) mat(i, k) = cx_from(M.at(i).at(k));
            Eigen::VectorXcd t(n);
            for (int i = 0; i < n; ++i) t(i) = cx_from(jf.at("translation").at(i));
            a.factors.push_back(PrimitiveAut::affine(std::move(mat), std::move(t)));
        } else if (kind == "shear") {
            a.factors.push_back(PrimitiveAut::shear(jf.at("axis"), expr_from_json(jf.at("f"))));
        } else if (kind == "overshear") {
            a.factors.push_back(PrimitiveAut::overshear(jf.at("axis"), expr_from_json(jf.at("f"))));
        } else if (kind == "twist") {
            a.factors.push_back(PrimitiveAut::twist(jf.at("gamma")));
        } else {
            throw Error("unknown automorphism kind '" + kind + "'");
        }
    }
    return a;
}

}  // namespace holo
