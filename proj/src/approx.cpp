#include "holo/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace holo {

Clause clause_const(RegionPtr region, cx value, double tol, double alpha) {
    Clause c;
    c.region = std::move(region);
    c.target = [value](cx) { return value; };
    c.target_desc = json{{"type", "const"}, {"value", {value.real(), value.imag()}}};
    c.tol = tol;
    c.alpha = alpha;
    return c;
}

Clause clause_fn(RegionPtr region, std::function<cx(cx)> f, json desc, double tol, double alpha) {
    Clause c;
    c.region = std::move(region);
    c.target = std::move(f);
    c.target_desc = std::move(desc);
    c.tol = tol;
    c.alpha = alpha;
    return c;
}

json fit_report_to_json(const FitReport& r) {
    json cl = json::array();
    for (const auto& c : r.clauses)
        cl.push_back({{"fit_residual", c.fit_residual},
                      {"ver_residual", c.ver_residual},
                      {"tol", c.tol},
                      {"fit_points", c.fit_points},
                      {"ver_points", c.ver_points}});
    return json{{"clauses", std::move(cl)},
                {"jet_residuals", r.jet_residuals},
                {"basis_size", r.basis_size},
                {"condition", r.condition},
                {"success", r.success},
                {"R_fit", r.R_fit},
                {"R_ver", r.R_ver},
                {"fit_pitch", r.fit_pitch},
                {"ver_pitch", r.ver_pitch},
                {"escalations", r.escalations}};
}

namespace {

constexpr double kRidge = 1e-12;
constexpr int kIrlsIters = 40;
constexpr double kLawsonExp = 0.8;

struct Basis {
    double scale = 1.0;  // powers are (z/scale)^m
    int degree = 0;
    std::vector<cx> rates;
    int size() const { return static_cast<int>(rates.size()) * (degree + 1); }

    ExprPtr fn(int j) const {
        const int per = degree + 1;
        const cx k = rates[j / per];
        const int m = j % per;
        std::vector<cx> coef(m + 1, cx(0.0));
        coef[m] = cx(1.0);
        ExprPtr p = ex::poly(coef, ex::scale(1.0 / scale, ex::var(0)));
        if (k == cx(0.0)) return p;
        return m == 0 ? ex::exp(ex::scale(k, ex::var(0)))
                      : ex::mul(ex::exp(ex::scale(k, ex::var(0))), p);
    }

    // Row of basis values at z.
    void eval_row(cx z, Eigen::RowVectorXcd& row) const {
        int col = 0;
        const cx w = z / scale;
        for (const cx& k : rates) {
            cx e = std::exp(k * z);
            for (int m = 0; m <= degree; ++m) {
                row(col++) = e;
                e *= w;
            }
        }
    }

    // Assemble f = sum c_j phi_j grouped per rate into Poly/Exp nodes.
    ExprPtr assemble(const Eigen::VectorXcd& c) const {
        const int per = degree + 1;
        std::vector<ExprPtr> terms;
        for (size_t r = 0; r < rates.size(); ++r) {
            std::vector<cx> coef(c.data() + r * per, c.data() + (r + 1) * per);
            while (coef.size() > 1 && coef.back() == cx(0.0)) coef.pop_back();
            if (coef.size() == 1 && coef[0] == cx(0.0)) continue;
            ExprPtr p = ex::poly(coef, ex::scale(1.0 / scale, ex::var(0)));
            terms.push_back(rates[r] == cx(0.0)
                                ? p
                                : ex::mul(ex::exp(ex::scale(rates[r], ex::var(0))), p));
        }
        if (terms.empty()) return ex::cst(0.0);
        return ex::add(std::move(terms));
    }
};

double clause_weight(const Clause& c, cx z) {
    return c.alpha > 0.0 ? std::exp(std::pow(std::abs(z), c.alpha)) : 1.0;
}

std::vector<double> jet_relative_residuals(const ExprPtr& f, const std::vector<Jet>& jets) {
    std::vector<double> out;
    for (const auto& jet : jets) {
        const Jet got = eval_jet(f, jet.point, static_cast<int>(jet.values.size()) - 1);
        for (size_t d = 0; d < jet.values.size(); ++d) {
            const double denom = std::max(1.0, std::abs(jet.values[d]));
            out.push_back(std::abs(got.values[d] - jet.values[d]) / denom);
        }
    }
    return out;
}

void measure_clauses(const ExprPtr& f, const ApproxTask& task, double R, double pitch, bool fit,
                     FitReport& rep) {
    rep.clauses.resize(task.clauses.size());
    for (size_t ci = 0; ci < task.clauses.size(); ++ci) {
        const Clause& c = task.clauses[ci];
        auto grid = sample_region(c.region, R, pitch);
        double worst = 0.0;
        for (cx z : grid) {
            const double res = std::abs(eval1(f, z) - c.target(z)) * clause_weight(c, z);
            worst = std::max(worst, res);
        }
        auto& cr = rep.clauses[ci];
        cr.tol = c.tol;
        if (fit) {
            cr.fit_residual = worst;
            cr.fit_points = static_cast<long>(grid.size());
        } else {
            cr.ver_residual = worst;
            cr.ver_points = static_cast<long>(grid.size());
        }
    }
}

bool all_within(const FitReport& rep) {
    for (const auto& c : rep.clauses)
        if (c.ver_residual > c.tol) return false;
    for (double r : rep.jet_residuals)
        if (r > 1e-8) return false;
    return true;
}

}  // namespace

std::pair<ExprPtr, FitReport> solve_task(const ApproxTask& task, const BasisSpec& basis) {
    if (task.clauses.empty() && task.jets.empty())
        throw Error("approximation task needs at least one clause or jet");
    if (task.R_ver < task.R_fit) throw Error("R_ver must be >= R_fit");
    for (const auto& c : task.clauses)
        if (c.tol <= 0.0) throw Error("clause tolerance must be positive");
    if (static_cast<int>(basis.rates.size()) > 32) throw Error("rate dictionary too large");

    FitReport rep;
    rep.R_fit = task.R_fit;
    rep.R_ver = task.R_ver;
    rep.fit_pitch = task.fit_pitch;
    rep.ver_pitch = task.ver_pitch;

    // Clause-free tasks reduce to minimal-degree interpolation.
    if (task.clauses.empty()) {
        ExprPtr f = hermite_interpolant(task.jets);
        rep.jet_residuals = jet_relative_residuals(f, task.jets);
        rep.basis_size = static_cast<int>(hermite_coefficients(task.jets).size());
        rep.condition = 1.0;
        rep.success = all_within(rep);
        return {f, rep};
    }

    // Fit grids, stacked.
    std::vector<cx> zs;
    std::vector<cx> ts;
    std::vector<double> Ws;
    std::vector<int> clause_of;
    for (size_t ci = 0; ci < task.clauses.size(); ++ci) {
        const Clause& c = task.clauses[ci];
        for (cx z : sample_region(c.region, task.R_fit, task.fit_pitch)) {
            zs.push_back(z);
            ts.push_back(c.target(z));
            Ws.push_back(clause_weight(c, z) / c.tol);
            clause_of.push_back(static_cast<int>(ci));
        }
    }
    const int ns = static_cast<int>(zs.size());

    Basis B;
    // Power scaling follows the data, not the nominal truncation: columns
    // (z/scale)^m with scale far above max |z| are numerically dead.
    double zmax = 1.0;
    for (cx z : zs) zmax = std::max(zmax, std::abs(z));
    for (const auto& j : task.jets) zmax = std::max(zmax, std::abs(j.point));
    B.scale = zmax;
    B.degree = basis.degree;
    B.rates = basis.rates;
    const int nb = B.size();
    rep.basis_size = nb;

    // Jet rows: exact linear constraints E c = v.
    int jet_rows = 0;
    for (const auto& j : task.jets) jet_rows += static_cast<int>(j.values.size());
    Eigen::MatrixXcd E(jet_rows, nb);
    Eigen::VectorXcd v(jet_rows);
    {
        int r = 0;
        for (const auto& jet : task.jets) {
            const int order = static_cast<int>(jet.values.size()) - 1;
            for (int j = 0; j < nb; ++j) {
                const Jet bj = eval_jet(B.fn(j), jet.point, order);
                for (int d = 0; d <= order; ++d) E(r + d, j) = bj.values[d];
            }
            for (int d = 0; d <= order; ++d) v(r + d) = jet.values[d];
            r += order + 1;
        }
    }

    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(nb);
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Identity(nb, nb);
    if (jet_rows > 0) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(E);
        c0 = cod.solve(v);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(E);
        lu.setThreshold(1e-10);
        K = lu.kernel();
        if ((E * c0 - v).norm() > 1e-8 * std::max(1.0, v.norm())) {
            // Inconsistent jet system; report the damage rather than throw.
            ExprPtr f = B.assemble(c0);
            rep.jet_residuals = jet_relative_residuals(f, task.jets);
            measure_clauses(f, task, task.R_ver, task.ver_pitch, false, rep);
            rep.success = false;
            return {f, rep};
        }
    }
    const int ny = static_cast<int>(K.cols());

    Eigen::VectorXcd coef = c0;
    if (ns > 0 && ny > 0) {
        Eigen::MatrixXcd A(ns, nb);
        Eigen::RowVectorXcd row(nb);
        for (int i = 0; i < ns; ++i) {
            B.eval_row(zs[i], row);
            A.row(i) = row;
        }
        const Eigen::MatrixXcd AK = A * K;
        const Eigen::VectorXcd base = A * c0;
        Eigen::VectorXd omega = Eigen::VectorXd::Ones(ns);

        {
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(AK);
            const double smin = svd.singularValues().tail(1)(0);
            const double smax = svd.singularValues()(0);
            rep.condition = std::min(1e300, smax / std::max(smin, 1e-300));
        }

        Eigen::VectorXcd best_y = Eigen::VectorXcd::Zero(ny);
        double best_s = std::numeric_limits<double>::infinity();
        for (int it = 0; it < kIrlsIters; ++it) {
            Eigen::VectorXd w2(ns);
            Eigen::VectorXcd gap(ns);
            for (int i = 0; i < ns; ++i) {
                w2(i) = omega(i) * Ws[i] * Ws[i];
                gap(i) = ts[i] - base(i);
            }
            Eigen::MatrixXcd M = AK.adjoint() * w2.asDiagonal() * AK;
            Eigen::VectorXcd rhs = AK.adjoint() * (w2.asDiagonal() * gap);
            M.diagonal().array() += kRidge;
            const Eigen::VectorXcd y = M.ldlt().solve(rhs);
            double smax = 0.0;
            Eigen::VectorXd s(ns);
            const Eigen::VectorXcd resid = AK * y + base;
            for (int i = 0; i < ns; ++i) {
                s(i) = Ws[i] * std::abs(resid(i) - ts[i]);
                smax = std::max(smax, s(i));
            }
            if (smax < best_s) {
                best_s = smax;
                best_y = y;
            }
            // Stop only with margin: the verification grid is finer than the
            // fit grid, so a residual just under tol on the fit grid can
            // still spike above tol between fit samples.
            if (smax <= 0.5) break;
            // Lawson reweighting, damped; normalized to mean 1.
            for (int i = 0; i < ns; ++i)
                omega(i) = std::clamp(omega(i) * std::pow(std::max(s(i), 1e-12), kLawsonExp),
                                      1e-12, 1e12);
            omega *= static_cast<double>(ns) / omega.sum();
        }
        coef = c0 + K * best_y;
    }

    ExprPtr f = B.assemble(coef);
    rep.jet_residuals = jet_relative_residuals(f, task.jets);
    measure_clauses(f, task, task.R_fit, task.fit_pitch, true, rep);
    // Verification residuals on the finer, larger grid.
    FitReport ver;
    measure_clauses(f, task, task.R_ver, task.ver_pitch, false, ver);
    for (size_t i = 0; i < rep.clauses.size(); ++i) {
        rep.clauses[i].ver_residual = ver.clauses[i].ver_residual;
        rep.clauses[i].ver_points = ver.clauses[i].ver_points;
    }
    rep.success = all_within(rep);
    return {f, rep};
}

std::pair<ExprPtr, FitReport> solve_task_escalating(const ApproxTask& task,
                                                    const BasisSpec& basis) {
    std::vector<BasisSpec> ladder;
    auto add_degrees = [&](std::vector<cx> rates) {
        for (int d = basis.degree; d <= 64; d = std::max(d + 1, 2 * d)) {
            BasisSpec b;
            b.degree = std::min(d, 64);
            b.rates = rates;
            ladder.push_back(std::move(b));
            if (d >= 64) break;
        }
    };
    auto with_extra = [&](std::initializer_list<double> extra) {
        std::vector<cx> r = basis.rates;
        for (double e : extra) r.push_back(cx(e));
        return r;
    };
    add_degrees(basis.rates);
    add_degrees(with_extra({0.5, -0.5}));
    add_degrees(with_extra({0.5, -0.5, 0.25, -0.25}));

    ExprPtr best_f;
    FitReport best_rep;
    double best_score = std::numeric_limits<double>::infinity();
    int attempt = 0;
    int stagnant = 0;
    for (const auto& b : ladder) {
        auto [f, rep] = solve_task(task, b);
        rep.escalations = attempt++;
        double score = 0.0;
        for (const auto& c : rep.clauses) score = std::max(score, c.ver_residual / c.tol);
        for (double jr : rep.jet_residuals) score = std::max(score, jr / 1e-8);
        if (rep.success) return {f, rep};
        if (score < 0.98 * best_score)
            stagnant = 0;
        else if (++stagnant >= 2)  // richer bases stopped helping; cut the ladder
            break;
        if (score < best_score) {
            best_score = score;
            best_f = f;
            best_rep = rep;
        }
    }
    return {best_f, best_rep};
}

FitReport verify_residual(const ExprPtr& f, const ApproxTask& task, double h) {
    FitReport rep;
    rep.R_fit = task.R_fit;
    rep.R_ver = task.R_ver;
    rep.fit_pitch = task.fit_pitch;
    rep.ver_pitch = h;
    measure_clauses(f, task, task.R_ver, h, false, rep);
    rep.jet_residuals = jet_relative_residuals(f, task.jets);
    rep.success = all_within(rep);
    return rep;
}

}  // namespace holo
