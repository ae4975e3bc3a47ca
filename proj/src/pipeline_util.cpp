#include "pipeline_util.hpp"

#include <cmath>

#include "holo/approx.hpp"

namespace holo::detail {

double circle_max(const ExprPtr& f, double R, int samples) {
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * kPi * i / samples;
        m = std::max(m, std::abs(eval1(f, cx(R * std::cos(th), R * std::sin(th)))));
    }
    return 1.02 * m;
}

Damped damped_interpolant(const std::vector<cx>& s, const std::vector<cx>& v, double shift,
                          double bound_re, double R, double target) {
    if (s.empty()) return {ex::cst(cx(0.0)), 0.0, 0.0};
    if (!(bound_re < shift)) throw Error("damped_interpolant: bound_re must be < shift");
    for (cx sj : s)
        if (sj.real() < shift - 1e-12)
            throw Error("damped_interpolant: node with Re below the damping shift");

    double lambda = 0.0;
    for (int iter = 0; iter < 120; ++iter) {
        std::vector<cx> data(s.size());
        for (size_t j = 0; j < s.size(); ++j) data[j] = v[j] * std::exp(-lambda * (s[j] - shift));
        ExprPtr p = lagrange_interpolant(s, data);
        const double M = circle_max(p, R);
        const double bound = std::exp(lambda * (bound_re - shift)) * M;
        if (bound <= target) {
            // e^{lambda (t - shift)} p(t); the exponent is a Poly child.
            ExprPtr f = ex::mul(
                ex::exp(ex::poly({cx(-lambda * shift), cx(lambda)}, ex::var(0))), p);
            return {f, lambda, bound};
        }
        lambda += std::max(0.5, std::log(bound / target) / (shift - bound_re));
    }
    throw Error("damped_interpolant: damping bound not reached");
}

bool hull_intersects(const ConvexBody& F, const std::vector<CPoint>& pts) {
    if (pts.empty()) return false;
    const int k = static_cast<int>(pts.size());
    lp::Problem prob;
    prob.c.assign(k, 0.0);
    prob.signs.assign(k, lp::VarSign::NonNeg);
    std::vector<Eigen::VectorXd> xs;
    xs.reserve(pts.size());
    for (const auto& p : pts) xs.push_back(to_real(p));
    for (int r = 0; r < F.rows(); ++r) {
        std::vector<double> row(k);
        for (int i = 0; i < k; ++i) row[i] = F.A.row(r).dot(xs[i]);
        prob.add_row(std::move(row), F.b(r), lp::RowType::LE);
    }
    prob.add_row(std::vector<double>(k, 1.0), 1.0, lp::RowType::EQ);
    return lp::solve(prob).status == lp::Status::Optimal;
}

std::pair<ExprPtr, FitReport> relaxed_fit(const ApproxTask& task, const BasisSpec& basis,
                                          bool strict, json& notes) {
    ApproxTask t = task;
    double factor = 1.0;
    for (int step = 0;; ++step) {
        auto res = solve_task_escalating(t, basis);
        if (res.second.success || strict || step == 5) {
            if (step > 0) {
                notes["relaxation_steps"] = step;
                notes["relaxation_factor"] = factor;
            }
            return res;
        }
        factor *= 1.25;
        for (auto& c : t.clauses) c.tol *= 1.25;
    }
}

std::vector<cx> body_coord_samples(const ConvexBody& F, int coord, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<cx> out;
    for (const auto& x : body_interior_samples(F, count, rng))
        out.emplace_back(x(2 * coord), x(2 * coord + 1));
    for (const auto& x : body_boundary_samples(F, count, rng))
        out.emplace_back(x(2 * coord), x(2 * coord + 1));
    return out;
}

json cx_json(cx z) { return json::array({z.real(), z.imag()}); }

cx cx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("expected [re, im] pair");
    return cx(j[0].get<double>(), j[1].get<double>());
}

}  // namespace holo::detail
