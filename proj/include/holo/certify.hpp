#pragma once

#include "holo/aut.hpp"
#include "holo/region.hpp"

namespace holo {

/// Entire curve C -> C^n as one expression tree per component.
struct HoloCurve {
    std::vector<ExprPtr> components;  // each arity <= 1
    std::string provenance;
    json stages = json::array();

    int n() const { return static_cast<int>(components.size()); }
};

CPoint curve_eval(const HoloCurve& c, cx t);
CPoint curve_deriv(const HoloCurve& c, cx t);
json curve_to_json(const HoloCurve& c);
HoloCurve curve_from_json(const json& j);

/// Forbidden set: a convex body in C^n, a union of complex hyperplanes, or a
/// product F x G with F in C^k, G in C^l.
struct ForbiddenSet {
    enum class Kind { None, Body, Hyperplanes, Product };
    Kind kind = Kind::None;
    ConvexBody body;        // Body
    HyperplaneUnion hyper;  // Hyperplanes
    ConvexBody left, right; // Product
    int k = 0, l = 0;       // Product split

    static ForbiddenSet none();
    static ForbiddenSet of_body(ConvexBody F);
    static ForbiddenSet of_hyperplanes(HyperplaneUnion H);
    static ForbiddenSet of_product(ConvexBody F, ConvexBody G, int k, int l);
};

/// Euclidean distance from p to the set (0 when inside).
double forbidden_distance(const ForbiddenSet& F, const CPoint& p);

json forbidden_to_json(const ForbiddenSet& F);
ForbiddenSet forbidden_from_json(const json& j);

/// One certificate section: name, verdict, and the measured numbers
/// (including grid metadata for every sampled claim).
struct Section {
    std::string name;
    bool pass = false;
    json data;
};

struct Certificate {
    int schema = 1;
    double R_ver = 12.0;
    std::vector<Section> sections;

    bool all_pass() const;
    const Section* find(const std::string& name) const;
};

json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

/// Interpolation data at one parameter: rows[k] is the k-th derivative
/// vector the curve must attain at alpha (rows[0] = value).
struct CurveJet {
    cx alpha;
    std::vector<CPoint> rows;
};

/// Relative residual per constraint row; pass iff all <= 1e-8.
Section check_interpolation(const HoloCurve& c, const std::vector<CurveJet>& jets);

/// Min sampled distance from the curve image (parameter lattice of the given
/// pitch in the disc |t| <= R_ver) to F; pass iff the margin is > 0. A
/// structural sub-result certifies coordinate-hyperplane avoidance exactly
/// when the matching components are structurally non-vanishing.
Section check_avoidance(const HoloCurve& c, const ForbiddenSet& F, double R_ver, double pitch);

/// Min sampled |phi'|; pass iff the floor exceeds 1e-10.
Section check_immersion(const HoloCurve& c, double R_ver, double pitch);

/// Min image separation over sampled parameter pairs with gap >= 0.01;
/// pass iff >= 1e-9.
Section check_injectivity(const HoloCurve& c, double R_ver, int samples, unsigned seed = 2026);

/// Min |phi| over 720 angular samples on each circle of the radii schedule;
/// pass iff the final value exceeds the threshold. Explicitly a proxy.
Section properness_proxy(const HoloCurve& c, std::vector<double> radii, double threshold);

/// Upper-bound witness |a2 - a1| / R for the Lempert function between the
/// curve points at a1, a2 on the verified radius. Refuses (throws) unless
/// avoidance was certified at R.
double lempert_witness(cx a1, cx a2, double R, bool avoidance_certified);

}  // namespace holo
