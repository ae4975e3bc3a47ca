#pragma once

#include <optional>

#include "holo/approx.hpp"
#include "holo/certify.hpp"

namespace holo {

/// Scene: the hypothesis data of one construction.
struct Scene {
    std::string pipeline;
    int n = 2, k = 0, l = 0;        // ambient dimensions (k/l for product scenes)
    ForbiddenSet F;
    std::vector<cx> alphas;         // interpolation parameters
    std::vector<CPoint> targets;    // a_j, with targets[j] hit at alphas[j]
    bool has_jet = false;           // prop7 data
    CPoint jet_c, jet_X;
    json params = json::object();   // eps, R_ver, pitch, J, seed, strict, ...

    double param(const std::string& key, double dflt) const;
};

json scene_to_json(const Scene& s);
Scene scene_from_json(const json& j);

struct PipelineResult {
    HoloCurve curve;
    Certificate certificate;
    std::vector<CurveJet> interp;  // the certified interpolation data
};

json result_to_json(const PipelineResult& r);

/// Dispatch on scene.pipeline; throws Error for unknown names or invalid
/// scenes.
PipelineResult run_pipeline(const Scene& s);

/// Re-certify a serialized curve against its scene from scratch.
Certificate certify_scene(const HoloCurve& curve, const Scene& s);

PipelineResult prop1_line(const Scene& s);
PipelineResult prop1_convex(const Scene& s);
HoloCurve prop2_initial(int n);
PipelineResult prop6_immersion(const Scene& s);
PipelineResult prop7_jet(const Scene& s);

// ---------------------------------------------------------------- Lemma 3

struct MoveOptions {
    double eps = 0.1;                 // max allowed displacement on K
    std::optional<CPoint> pin;        // A-point to fix with identity derivative
    int max_retries = 3;
};

struct MoveReport {
    CompositeAut aut;
    double k_displacement = 0.0;  // max sampled |phi(z) - z| on K
    double p_error = 0.0;         // |phi(p) - q|
    json log = json::object();
};

/// Automorphism fixing H pointwise (structurally), fixing every point of
/// A \ H exactly, sending p to q, with sampled K-displacement <= opt.eps.
MoveReport lemma3_move(const ConvexBody& K, const std::vector<CPoint>& A,
                       const HyperplaneUnion& H, const CPoint& p, const CPoint& q,
                       const MoveOptions& opt);

struct ClaimCheck {
    bool precondition_ok = false;  // sampled displacement <= r < dist(K_j, bd K_{j-1})
    bool claim_ok = false;         // every sampled K_j point has psi^{-1}(x) in K_{j-1}
    double displacement = 0.0;     // max sampled |psi(z) - z| on K_{j-1}
    double separation = 0.0;       // sampled dist(K_j, bd K_{j-1})
    long violations = 0;
};

/// The containment claim K_j subset psi(K_{j-1}) under a displacement bound,
/// checked with the exact inverse and membership tolerance 1e-9.
ClaimCheck claim_check(const ConvexBody& Kprev, const ConvexBody& Kj, const CompositeAut& psi,
                       double r, int samples = 200, unsigned seed = 99);

// ---------------------------------------------------------------- Prop 5

struct Prop5State {
    HoloCurve curve;
    std::vector<cx> zetas;        // zeta_1 first (the pinned parameter)
    std::vector<CPoint> alphas;   // curve(zeta_l) = alpha_l
    CPoint X;                     // curve'(zeta_1) = X, preserved by stages
    double rho = 0.0;
    json log = json::array();
};

/// H_0(zeta) = c + zeta X, zeta_1 = 0.
Prop5State prop5_initial(const CPoint& c, const CPoint& X);

/// One iteration H_j = psi_j o H_{j-1}: moves a fresh parameter point onto
/// alpha_next while keeping previous data, verifying (a) exactly and
/// (b)-(d) by sampling. Throws on budget violation.
Prop5State prop5_stage(const Prop5State& st, const CPoint& alpha_next, const ConvexBody& Kj,
                       double delta_j);

// ---------------------------------------------------------------- Prop 6

/// Minimal t in (0,1) with t e^{x^{1/3} - (x+2)^{1/4}} >= 4e(1-t)(x+2)^{4/3}
/// on the scan grid, then widened by the safety factor.
double prop6_scan_t(double x_max = 100.0, double step = 0.01, double safety = 1.01);
/// Margin check of the same inequality for a given t (min margin over grid).
double prop6_t_margin(double t, double x_max = 100.0, double step = 0.01);

}  // namespace holo
