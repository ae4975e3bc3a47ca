#pragma once

// Internal helpers shared by the pipeline translation units.

#include "holo/interp.hpp"
#include "holo/lp.hpp"
#include "holo/pipelines.hpp"

namespace holo::detail {

inline constexpr double kPi = 3.14159265358979323846;

/// Max |f| over `samples` points of the circle |z| = R, widened by 2%.
/// For polynomials/entire f this bounds the disc max (maximum principle)
/// up to the sampling slack.
double circle_max(const ExprPtr& f, double R, int samples = 720);

/// Exact interpolant f(t) = e^{lambda (t - shift)} p(t) with f(s_j) = v_j and
/// |f| <= target on {Re t <= bound_re} within |t| <= R (sampled circle-max
/// bound). Requires Re s_j >= shift and bound_re < shift. Empty data -> 0.
struct Damped {
    ExprPtr f;
    double lambda = 0.0;
    double bound = 0.0;  // certified sup on the half-plane within radius R
};
Damped damped_interpolant(const std::vector<cx>& s, const std::vector<cx>& v, double shift,
                          double bound_re, double R, double target);

/// Does the convex hull of pts intersect F? (exact LP)
bool hull_intersects(const ConvexBody& F, const std::vector<CPoint>& pts);

/// solve_task_escalating with the tolerance-relaxation ladder: every failed
/// attempt scales all clause tolerances by 1.25 (max 5 steps, disabled when
/// strict). Steps taken are appended to notes.
std::pair<ExprPtr, FitReport> relaxed_fit(const ApproxTask& task, const BasisSpec& basis,
                                          bool strict, json& notes);

/// z2-coordinates (as complex numbers) of sampled points of a body in C^2.
std::vector<cx> body_coord_samples(const ConvexBody& F, int coord, int count, unsigned seed);

json cx_json(cx z);
cx cx_from_json(const json& j);

/// The interpolation data a scene prescribes (recomputable by verification).
std::vector<CurveJet> scene_jets(const Scene& s);

/// Prop-6 point split: aPts get first blocks at distance >= eps from F.left.
void prop6_split(const Scene& s, std::vector<CPoint>& aPts, std::vector<CPoint>& bPts,
                 double& eps);

Section prop6_derivative_section(const HoloCurve& c, const Scene& s);
Section prop7_dichotomy_section(const HoloCurve& c, const Scene& s);

}  // namespace holo::detail
