#include <algorithm>
#include <cmath>
#include <random>

#include "holo/pipelines.hpp"
#include "pipeline_util.hpp"

namespace holo {

namespace {

std::vector<CPoint> cloud_points(const ConvexBody& K, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<CPoint> out;
    for (const auto& x : body_interior_samples(K, count, rng)) out.push_back(from_real(x));
    for (const auto& x : body_boundary_samples(K, count, rng)) out.push_back(from_real(x));
    return out;
}

double point_dist(const CPoint& a, const CPoint& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

double max_displacement(const CompositeAut& a, const std::vector<CPoint>& pts) {
    double d = 0.0;
    for (const auto& x : pts) d = std::max(d, point_dist(apply_aut(a, x), x));
    return d;
}

/// Product of coordinate i over i != m, expressed in the shear-input
/// variables of axis m.
ExprPtr coord_product(int n, int m) {
    std::vector<ExprPtr> factors;
    for (int i = 0; i < n; ++i)
        if (i != m) factors.push_back(ex::var(shear_var_index(m, i)));
    if (factors.empty()) return ex::cst(cx(1.0));
    return ex::mul(std::move(factors));
}

cx eval_product(const CPoint& z, int m) {
    cx v(1.0);
    for (size_t i = 0; i < z.size(); ++i)
        if (static_cast<int>(i) != m) v *= z[i];
    return v;
}

/// expr^M by squaring.
ExprPtr expr_pow(ExprPtr base, int M) {
    ExprPtr acc = ex::cst(cx(1.0));
    while (M > 0) {
        if (M & 1) acc = ex::mul(acc, base);
        base = ex::mul(base, base);
        M >>= 1;
    }
    return acc;
}

struct MoveState {
    CompositeAut core;
    CPoint p, q_img, pin;
    bool has_pin = false;
    std::vector<CPoint> a, a_orig;
    std::vector<CPoint> cloud;

    void apply(const PrimitiveAut& f) {
        core.factors.push_back(f);
        p = apply_primitive(f, p);
        q_img = apply_primitive(f, q_img);
        if (has_pin) pin = apply_primitive(f, pin);
        for (auto& x : a) x = apply_primitive(f, x);
        for (auto& x : cloud) x = apply_primitive(f, x);
    }
};

}  // namespace

MoveReport lemma3_move(const ConvexBody& K, const std::vector<CPoint>& A,
                       const HyperplaneUnion& H, const CPoint& p, const CPoint& q,
                       const MoveOptions& opt) {
    const int n = static_cast<int>(p.size());
    if (static_cast<int>(q.size()) != n || K.dim() != 2 * n)
        throw Error("lemma3_move: dimension mismatch");
    if (!H.hyperplanes.empty() && !H.normalized)
        throw Error("lemma3_move: H must be normalized to coordinate hyperplanes");

    MoveReport rep;
    rep.aut.n = n;
    if (point_dist(p, q) < 1e-15) {
        rep.log["identity"] = true;
        return rep;
    }
    if (point_distance(K, to_real(p)) <= 0.0 || point_distance(K, to_real(q)) <= 0.0)
        throw Error("lemma3_move: p and q must lie outside K");
    if (on_hyperplanes(H, p) || on_hyperplanes(H, q))
        throw Error("lemma3_move: p and q must lie off H");

    std::vector<int> S = H.coord_axes;
    std::sort(S.begin(), S.end());
    auto in_S = [&](int m) { return std::binary_search(S.begin(), S.end(), m); };

    // Points of A on H are fixed structurally by every factor below; the rest
    // must be restored exactly by the log-correcting overshears.
    std::vector<CPoint> Aoff;
    for (const auto& a : A) {
        if (static_cast<int>(a.size()) != n) throw Error("lemma3_move: A dimension mismatch");
        if (!on_hyperplanes(H, a)) Aoff.push_back(a);
    }
    const bool has_pin = opt.pin.has_value();
    CPoint pin = has_pin ? *opt.pin : CPoint();
    if (has_pin) {
        // Treat a pin that coincides with a tracked point only once.
        Aoff.erase(std::remove_if(Aoff.begin(), Aoff.end(),
                                  [&](const CPoint& a) { return point_dist(a, pin) < 1e-12; }),
                   Aoff.end());
    }

    // All tracked points must have non-zero coordinates (needed by the
    // coordinate-product nodes). A unitary mixing of the non-H coordinates is
    // the built-in linear change when that fails.
    auto has_zero = [&](const CPoint& x) {
        for (cx z : x)
            if (std::abs(z) < 1e-12) return true;
        return false;
    };
    std::vector<CPoint> tracked_all = Aoff;
    tracked_all.push_back(p);
    tracked_all.push_back(q);
    if (has_pin) tracked_all.push_back(pin);

    Eigen::MatrixXcd Lm = Eigen::MatrixXcd::Identity(n, n);
    bool use_L = false;
    if (std::any_of(tracked_all.begin(), tracked_all.end(), has_zero)) {
        std::vector<int> Tc;
        for (int i = 0; i < n; ++i)
            if (!in_S(i)) Tc.push_back(i);
        if (Tc.size() < 2)
            throw Error("lemma3_move: zero coordinate cannot be removed by a linear change");
        bool fixed = false;
        for (double th : {0.37, 0.73, 1.13, 1.51, 1.97}) {
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n);
            for (size_t i = 0; i + 1 < Tc.size(); ++i) {
                Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(n, n);
                const cx c = std::cos(th), sp = std::sin(th) * std::exp(cx(0.0, th));
                G(Tc[i], Tc[i]) = c;
                G(Tc[i], Tc[i + 1]) = -sp;
                G(Tc[i + 1], Tc[i]) = std::conj(sp);
                G(Tc[i + 1], Tc[i + 1]) = c;
                M = G * M;
            }
            bool ok = true;
            for (const auto& x : tracked_all) {
                Eigen::Map<const Eigen::VectorXcd> v(x.data(), n);
                Eigen::VectorXcd y = M * v;
                for (int i = 0; i < n && ok; ++i) ok = std::abs(y(i)) >= 1e-12;
                if (!ok) break;
            }
            if (ok) {
                Lm = M;
                use_L = true;
                fixed = true;
                break;
            }
        }
        if (!fixed) throw Error("lemma3_move: no mixing angle removes the zero coordinates");
    }

    auto map_pt = [&](const CPoint& x) {
        if (!use_L) return x;
        Eigen::Map<const Eigen::VectorXcd> v(x.data(), n);
        Eigen::VectorXcd y = Lm * v;
        return CPoint(y.data(), y.data() + n);
    };
    const ConvexBody Kw =
        use_L ? affine_image(K, Lm, Eigen::VectorXcd::Zero(n)) : K;
    const CPoint pw = map_pt(p), qw = map_pt(q);
    std::vector<CPoint> Aw;
    for (const auto& a : Aoff) Aw.push_back(map_pt(a));
    const CPoint pinw = has_pin ? map_pt(pin) : CPoint();

    // The working construction, parameterized by a displacement budget.
    auto build_core = [&](double budget) {
        MoveState st;
        st.core.n = n;
        st.p = pw;
        st.q_img = qw;
        st.has_pin = has_pin;
        st.pin = pinw;
        st.a = Aw;
        st.a_orig = Aw;
        st.cloud = cloud_points(Kw, 150, 11);

        // (1) Product separation: only when coordinate products of the
        // restore/target set collide (a no-op keeps the pin derivative clean).
        bool need_sep = false;
        std::vector<CPoint> nodeset = Aw;
        nodeset.push_back(pw);
        nodeset.push_back(qw);
        if (has_pin) nodeset.push_back(pinw);
        for (int m = 0; m < n && !need_sep; ++m)
            for (size_t i = 0; i < nodeset.size() && !need_sep; ++i)
                for (size_t j = i + 1; j < nodeset.size(); ++j)
                    if (std::abs(eval_product(nodeset[i], m) - eval_product(nodeset[j], m)) <
                        1e-8) {
                        need_sep = true;
                        break;
                    }
        if (need_sep) {
            std::vector<CPoint> sep_pts = Aw;
            sep_pts.push_back(pw);
            sep_pts.push_back(qw);
            if (has_pin) sep_pts.push_back(pinw);
            bool ok = false;
            for (double eh = budget / 4.0; eh > budget / 1024.0; eh /= 2.0) {
                CompositeAut sep = product_separation(sep_pts, eh);
                if (max_displacement(sep, st.cloud) <= budget / 4.0) {
                    for (const auto& f : sep.factors) st.apply(f);
                    ok = true;
                    break;
                }
            }
            if (!ok) throw Error("lemma3_move: separation displacement budget unreachable");
        }
        rep.log["separation"] = need_sep;

        // (2) Carrier: move the p-track onto the (separated image of) q one
        // coordinate at a time, with factors damped away from K.
        for (int m = 0; m < n; ++m) {
            const cx tgt = st.q_img[m];
            if (std::abs(st.p[m] - tgt) < 1e-14) continue;
            int best_j = -1;
            double best_clear = 0.0;
            cx best_c;
            for (int j = 0; j < n; ++j) {
                if (j == m) continue;
                cx cj(0.0);
                for (const auto& x : st.cloud) cj += x[j];
                cj /= static_cast<double>(st.cloud.size());
                double rho = 1e-9;
                for (const auto& x : st.cloud) rho = std::max(rho, std::abs(x[j] - cj));
                const double clear = std::abs(st.p[j] - cj) / rho;
                if (clear > best_clear) {
                    best_clear = clear;
                    best_j = j;
                    best_c = cj;
                }
            }
            if (best_j < 0 || best_clear <= 1.05)
                throw Error("lemma3_move: p lies in the projection shadow of K");

            ExprPtr damp_base = ex::scale(cx(1.0) / (st.p[best_j] - best_c),
                                          ex::shift(ex::var(shear_var_index(m, best_j)),
                                                    -best_c));
            // Zeros at the tracked points: the high damping power is only
            // controlled on the K cloud, so each tracked point gets an exact
            // zero factor instead.  Each point picks its own coordinate (the
            // one where it differs most from p), normalized to 1 at p.
            auto zero_factor = [&](const CPoint& x) {
                int jx = -1;
                double gap = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j == m) continue;
                    const double g = std::abs(st.p[j] - x[j]);
                    if (g > gap) {
                        gap = g;
                        jx = j;
                    }
                }
                if (jx < 0 || gap < 1e-6)
                    throw Error("lemma3_move: tracked point shares all usable coordinates with p");
                return ex::scale(cx(1.0) / (st.p[jx] - x[jx]),
                                 ex::shift(ex::var(shear_var_index(m, jx)), -x[jx]));
            };
            std::vector<ExprPtr> track_zeros;
            for (const auto& x : st.a) track_zeros.push_back(zero_factor(x));
            if (has_pin) {
                // Double zero at the pin: the factor then perturbs neither the
                // pin value nor its derivative.  Applied once (not inside the
                // M-power): away from K its modulus can exceed 1 and the
                // damping power must stay a contraction.
                ExprPtr pz = zero_factor(st.pin);
                track_zeros.push_back(ex::mul(pz, pz));
            }
            std::vector<ExprPtr> hfac;
            cx hval(1.0);
            for (int sidx : S)
                if (sidx != m) {
                    hfac.push_back(
                        ex::scale(cx(1.0) / st.p[sidx], ex::var(shear_var_index(m, sidx))));
                    hval *= cx(1.0);
                }
            bool placed = false;
            for (int M = 1; M <= 4096 && !placed; M *= 2) {
                ExprPtr f;
                PrimitiveAut prim = PrimitiveAut::shear(m, ex::cst(cx(0.0)));
                std::vector<ExprPtr> parts = hfac;
                for (const auto& tz : track_zeros) parts.push_back(tz);
                parts.push_back(expr_pow(damp_base, M));
                if (in_S(m)) {
                    parts.push_back(ex::cst(std::log(tgt / st.p[m])));
                    prim = PrimitiveAut::overshear(m, ex::mul(parts));
                } else {
                    parts.push_back(ex::cst(tgt - st.p[m]));
                    prim = PrimitiveAut::shear(m, ex::mul(parts));
                }
                double d = 0.0;
                try {
                    for (const auto& x : st.cloud)
                        d = std::max(d, point_dist(apply_primitive(prim, x), x));
                } catch (const OverflowError&) {
                    d = std::numeric_limits<double>::infinity();
                }
                if (d <= budget / (4.0 * n)) {
                    st.apply(prim);
                    placed = true;
                }
            }
            if (!placed) throw Error("lemma3_move: carrier displacement budget unreachable");
        }

        // (3) Log-correcting overshears: restore A exactly, take the p-track
        // to q, fix H structurally, and (with a pin) keep the correction flat
        // to first order at the pin.
        for (int m = 0; m < n; ++m) {
            std::vector<Jet> data;
            auto add_node = [&](const CPoint& cur, cx target_m, bool flat) {
                const cx x = eval_product(cur, m);
                if (std::abs(x) < 1e-10)
                    throw Error("lemma3_move: correction node at zero product");
                const cx v = std::log(target_m / cur[m]) / x;
                if (flat)
                    data.push_back(Jet{x, {v, cx(0.0)}});
                else
                    data.push_back(Jet{x, {v}});
            };
            for (size_t i = 0; i < st.a.size(); ++i) add_node(st.a[i], st.a_orig[i][m], false);
            add_node(st.p, qw[m], false);
            if (has_pin) add_node(st.pin, pinw[m], true);
            for (size_t i = 0; i < data.size(); ++i)
                for (size_t j = i + 1; j < data.size(); ++j)
                    if (std::abs(data[i].point - data[j].point) < 1e-8)
                        throw Error("lemma3_move: correction nodes collide");
            ExprPtr fm = hermite_interpolant(data);
            ExprPtr pi = coord_product(n, m);
            PrimitiveAut psi = PrimitiveAut::overshear(m, ex::mul(pi, compose1(fm, pi)));
            st.apply(psi);
        }
        return st;
    };

    double budget = opt.eps;
    std::string last_error;
    for (int attempt = 0; attempt <= opt.max_retries; ++attempt, budget /= 10.0) {
        MoveState st;
        try {
            st = build_core(budget);
        } catch (const Error& e) {
            last_error = e.what();
            continue;
        }
        CompositeAut full = st.core;
        if (use_L) {
            CompositeAut Lc, Linv;
            Lc.n = Linv.n = n;
            Lc.factors.push_back(PrimitiveAut::affine(Lm, Eigen::VectorXcd::Zero(n)));
            Linv.factors.push_back(
                PrimitiveAut::affine(Lm.adjoint(), Eigen::VectorXcd::Zero(n)));
            full = compose_aut(compose_aut(Lc, st.core), Linv);
        }
        const double disp = max_displacement(full, cloud_points(K, 200, 13));
        const double perr = point_dist(apply_aut(full, p), q);
        double aerr = 0.0;
        for (const auto& a : Aoff) aerr = std::max(aerr, point_dist(apply_aut(full, a), a));
        if (disp <= opt.eps && perr <= 1e-8) {
            rep.aut = full;
            rep.k_displacement = disp;
            rep.p_error = perr;
            rep.log["a_restore_error"] = aerr;
            rep.log["attempts"] = attempt + 1;
            rep.log["budget"] = budget;
            rep.log["linear_change"] = use_L;
            if (has_pin) {
                // Finite-difference Jacobian distortion at the pin.
                double jerr = 0.0;
                const double hstep = 1e-5;
                for (int d = 0; d < 2 * n; ++d) {
                    CPoint x = pin;
                    x[d / 2] += (d % 2 == 0) ? cx(hstep) : cx(0.0, hstep);
                    const CPoint y = apply_aut(full, x);
                    CPoint expect = apply_aut(full, pin);
                    for (int i = 0; i < n; ++i) {
                        const cx want =
                            expect[i] + (x[i] - pin[i]);
                        jerr = std::max(jerr, std::abs(y[i] - want) / hstep);
                    }
                }
                rep.log["pin_jacobian_error"] = jerr;
            }
            return rep;
        }
        last_error = "displacement " + std::to_string(disp) + " above eps";
    }
    throw Error("lemma3_move: failed after retries (" + last_error + ")");
}

// ------------------------------------------------------------ claim_check

ClaimCheck claim_check(const ConvexBody& Kprev, const ConvexBody& Kj, const CompositeAut& psi,
                       double r, int samples, unsigned seed) {
    ClaimCheck out;
    std::mt19937_64 rng(seed);
    const auto bnd = body_boundary_samples(Kprev, samples, rng);
    const auto interior = body_interior_samples(Kprev, samples, rng);
    out.separation = std::numeric_limits<double>::infinity();
    for (const auto& x : bnd) {
        out.separation = std::min(out.separation, point_distance(Kj, x));
        const CPoint z = from_real(x);
        out.displacement = std::max(out.displacement, point_dist(apply_aut(psi, z), z));
    }
    for (const auto& x : interior) {
        const CPoint z = from_real(x);
        out.displacement = std::max(out.displacement, point_dist(apply_aut(psi, z), z));
    }
    out.precondition_ok = out.displacement <= r && r < out.separation;

    const CompositeAut inv = invert_aut(psi);
    for (const auto& x : body_interior_samples(Kj, samples, rng)) {
        const CPoint y = apply_aut(inv, from_real(x));
        if (!body_contains(Kprev, to_real(y), 1e-9)) ++out.violations;
    }
    out.claim_ok = out.violations == 0;
    return out;
}

// ---------------------------------------------------------------- prop 5

Prop5State prop5_initial(const CPoint& c, const CPoint& X) {
    if (c.size() != X.size() || c.size() < 2) throw Error("prop5: dimension mismatch");
    Prop5State st;
    for (size_t m = 0; m < c.size(); ++m)
        st.curve.components.push_back(ex::poly({c[m], X[m]}, ex::var(0)));
    st.curve.provenance = "prop5";
    st.zetas = {cx(0.0)};
    st.alphas = {c};
    st.X = X;
    st.rho = 1.0;
    st.log.push_back(json{{"op", "initial"}});
    return st;
}

Prop5State prop5_stage(const Prop5State& st, const CPoint& alpha_next, const ConvexBody& Kj,
                       double delta_j) {
    const int n = st.curve.n();
    if (static_cast<int>(alpha_next.size()) != n) throw Error("prop5_stage: dimension mismatch");

    // K for the move: covers the traced curve on the previous disc, so the
    // delta budget controls (c).  K_j avoidance is verified separately in (d);
    // folding K_j into the cover would often swallow alpha_next, which must
    // stay outside the move's protected body.
    std::vector<Eigen::VectorXd> covers;
    for (double rr = 0.0; rr <= st.rho + 1e-9; rr += 0.5) {
        const int steps = std::max(1, static_cast<int>(std::ceil(8 * rr)));
        for (int i = 0; i < steps; ++i) {
            const double th = 2.0 * detail::kPi * i / steps;
            covers.push_back(
                to_real(curve_eval(st.curve, cx(rr * std::cos(th), rr * std::sin(th)))));
        }
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(2 * n);
    for (const auto& x : covers) centroid += x;
    centroid /= static_cast<double>(covers.size());
    double rad = 0.0;
    for (const auto& x : covers) rad = std::max(rad, (x - centroid).norm());
    const ConvexBody Kmove = ball_body(centroid, 1.02 * rad, 16 * n);

    // Fresh parameter: first grid point past rho + 1 whose curve point clears
    // the cover ball in every coordinate by a comfortable factor (the move's
    // carrier needs a damping coordinate for each axis).
    cx zeta_new(0.0);
    CPoint pmove;
    bool found = false;
    for (int i = 0; i <= 200 && !found; ++i) {
        const cx z(st.rho + 1.0 + 0.5 * i, 0.0);
        const CPoint pt = curve_eval(st.curve, z);
        double coord_clear = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            coord_clear = std::min(
                coord_clear, std::abs(pt[static_cast<size_t>(j)] -
                                      cx(centroid[2 * j], centroid[2 * j + 1])));
        if (point_distance(Kmove, to_real(pt)) > 0.5 && coord_clear > 1.5 * (1.02 * rad)) {
            zeta_new = z;
            pmove = pt;
            found = true;
        }
    }
    if (!found) throw Error("prop5_stage: no fresh parameter clears the cover ball");

    MoveOptions opt;
    opt.eps = 0.9 * delta_j;
    opt.pin = st.alphas[0];
    HyperplaneUnion Hempty;
    Hempty.n = n;
    Hempty.normalized = true;
    std::vector<CPoint> fixed(st.alphas.begin() + 1, st.alphas.end());
    MoveReport mv = lemma3_move(Kmove, fixed, Hempty, pmove, alpha_next, opt);

    Prop5State next;
    next.curve.components = apply_to_exprs(mv.aut, st.curve.components);
    next.curve.provenance = st.curve.provenance;
    next.curve.stages = st.curve.stages;
    next.zetas = st.zetas;
    next.zetas.push_back(zeta_new);
    next.alphas = st.alphas;
    next.alphas.push_back(alpha_next);
    next.X = st.X;
    next.log = st.log;

    // (a) data points, exactly (to roundoff / 1e-8).
    double interp_err = 0.0;
    for (size_t li = 0; li < next.zetas.size(); ++li) {
        const CPoint v = curve_eval(next.curve, next.zetas[li]);
        interp_err = std::max(interp_err, point_dist(v, next.alphas[li]));
    }
    if (interp_err > 1e-8) throw Error("prop5_stage: (a) interpolation violated");
    double deriv_err = 0.0;
    {
        const CPoint d = curve_deriv(next.curve, next.zetas[0]);
        deriv_err = point_dist(d, next.X);
    }

    // (c) displacement on the previous disc.
    double disp = 0.0;
    for (double x = -st.rho; x <= st.rho + 1e-9; x += 0.5)
        for (double y = -st.rho; y <= st.rho + 1e-9; y += 0.5) {
            const cx z(x, y);
            if (std::abs(z) > st.rho) continue;
            disp = std::max(disp,
                            point_dist(curve_eval(next.curve, z), curve_eval(st.curve, z)));
        }
    if (disp > delta_j) throw Error("prop5_stage: (c) displacement budget violated");

    // (b) choose rho_j on a grid so the ring stays outside |alpha_j| - 1.
    double bound = 0.0;
    for (const auto& alp : next.alphas) {
        double nm = 0.0;
        for (cx z : alp) nm += std::norm(z);
        bound = std::max(bound, std::sqrt(nm));
    }
    double rho_j = st.rho + 1.0;
    bool ok_b = false;
    for (int i = 0; i <= 40 && !ok_b; ++i, rho_j += 0.5) {
        double minmod = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 180; ++a) {
            const double th = 2.0 * detail::kPi * a / 180.0;
            const CPoint v =
                curve_eval(next.curve, cx(rho_j * std::cos(th), rho_j * std::sin(th)));
            double nm = 0.0;
            for (cx z : v) nm += std::norm(z);
            minmod = std::min(minmod, std::sqrt(nm));
        }
        ok_b = minmod > bound - 1.0;
        if (ok_b) break;
    }
    if (!ok_b) throw Error("prop5_stage: (b) no admissible rho found on the grid");
    next.rho = rho_j;

    // (d) sampled parameter grid keeps the curve off K_j.
    double dmin = std::numeric_limits<double>::infinity();
    for (double x = -rho_j; x <= rho_j + 1e-9; x += 0.5)
        for (double y = -rho_j; y <= rho_j + 1e-9; y += 0.5) {
            const cx z(x, y);
            if (std::abs(z) > rho_j) continue;
            dmin = std::min(dmin, point_distance(Kj, to_real(curve_eval(next.curve, z))));
        }
    if (!(dmin > 0.0)) throw Error("prop5_stage: (d) curve meets K_j on the sample grid");

    next.log.push_back(json{{"op", "stage"},
                            {"zeta", detail::cx_json(zeta_new)},
                            {"rho", rho_j},
                            {"delta", delta_j},
                            {"displacement", disp},
                            {"interp_err", interp_err},
                            {"deriv_err", deriv_err},
                            {"Kj_clearance", dmin},
                            {"move", mv.log}});
    return next;
}

}  // namespace holo
