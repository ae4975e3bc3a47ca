#pragma once

#include <array>

#include "holo/aut.hpp"

namespace holo {

/// One complete vector-field term on C^n with a polynomial time weight
/// w(t) = w0 + w1 t + w2 t^2 + w3 t^3:
///  - Shear field:     dz_axis/dt = w(t) * g(other coordinates)
///  - Overshear field: dz_axis/dt = w(t) * z_axis * g(other coordinates)
/// Both integrate in closed form when frozen in time.
struct FieldTerm {
    enum class Kind { Shear, Overshear };
    Kind kind = Kind::Shear;
    int axis = 0;
    ExprPtr g;  // arity n-1
    std::array<double, 4> weight{1.0, 0.0, 0.0, 0.0};
};

double weight_at(const FieldTerm& term, double t);

struct SplittingSchedule {
    int n = 2;
    int N = 1;
    std::vector<FieldTerm> terms;  // horizon is [0, 1]
};

/// Exact time-s flow of the (frozen, unit-weight) field:
/// Shear field -> Shear(axis, s g); Overshear field -> Overshear(axis, s g).
PrimitiveAut exact_flow(const FieldTerm& term, double s);

/// Lie-Trotter composition: for each window j = 0..N-1 freeze every term's
/// weight at t = j/N and sequence the exact flows over the step 1/N.
/// Returns the full factored composite (N x #terms factors).
CompositeAut splitting_compose(const SplittingSchedule& sched);

/// Time-one map of the full time-dependent field at the probes, by adaptive
/// Dormand-Prince RK45 at the given tolerance.
std::vector<CPoint> reference_time_one(const SplittingSchedule& sched,
                                       const std::vector<CPoint>& probes, double tol = 1e-12);

struct ConvergenceRow {
    int N = 0;
    double error = 0.0;  // max probe error vs the reference
};

/// Rows sorted by N ascending.
std::vector<ConvergenceRow> convergence_study(const SplittingSchedule& templ,
                                              std::vector<int> Ns,
                                              const std::vector<CPoint>& probes);

/// CSV with header "N,error".
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

json schedule_to_json(const SplittingSchedule& s);
SplittingSchedule schedule_from_json(const json& j);

}  // namespace holo
