#pragma once

#include <functional>

#include "holo/interp.hpp"
#include "holo/region.hpp"

namespace holo {

/// One approximation clause: keep |f - target| <= tol on the region,
/// optionally tightened away from the origin by a decay profile — alpha > 0
/// means the enforced bound is tol * e^{-|z|^alpha} (equivalently the
/// residual is weighted by e^{+|z|^alpha} before comparing with tol).
struct Clause {
    RegionPtr region;
    std::function<cx(cx)> target;  // need not be entire; sampled only
    json target_desc;              // serializable description
    double tol = 1e-6;
    double alpha = 0.0;
};

Clause clause_const(RegionPtr region, cx value, double tol, double alpha = 0.0);
Clause clause_fn(RegionPtr region, std::function<cx(cx)> f, json desc, double tol,
                 double alpha = 0.0);

struct ApproxTask {
    std::vector<Clause> clauses;
    std::vector<Jet> jets;  // exact interpolation constraints
    double R_fit = 8.0;
    double R_ver = 12.0;
    double fit_pitch = 0.25;
    double ver_pitch = 0.125;
};

/// Dictionary e^{k z} (z/R)^m, m <= degree, one block per rate k.
struct BasisSpec {
    int degree = 10;
    std::vector<cx> rates{cx(0.0), cx(-1.0), cx(-2.0)};
};

struct FitReport {
    struct ClauseReport {
        double fit_residual = 0.0;  // max weighted residual on the fit grid
        double ver_residual = 0.0;  // ... on the verification grid
        double tol = 0.0;
        long fit_points = 0;
        long ver_points = 0;
    };
    std::vector<ClauseReport> clauses;
    std::vector<double> jet_residuals;  // relative, per jet constraint row
    int basis_size = 0;
    double condition = 0.0;
    bool success = false;
    double R_fit = 0.0, R_ver = 0.0, fit_pitch = 0.0, ver_pitch = 0.0;
    int escalations = 0;
};

json fit_report_to_json(const FitReport& r);

/// Weighted-minimax fit (Lawson IRLS) over the basis span with the jet rows
/// eliminated exactly. Residuals in the report are measured on the finer
/// verification grids. Never throws on residual failure: success=false.
std::pair<ExprPtr, FitReport> solve_task(const ApproxTask& task, const BasisSpec& basis);

/// solve_task with the escalation ladder: degree doubling (cap 64), then
/// extra rates +-1/2, then +-1/4. Returns the first success, else the best
/// attempt with success=false.
std::pair<ExprPtr, FitReport> solve_task_escalating(const ApproxTask& task,
                                                    const BasisSpec& basis);

/// Recompute weighted residuals for f on fresh grids of pitch h within R_ver.
FitReport verify_residual(const ExprPtr& f, const ApproxTask& task, double h);

}  // namespace holo
