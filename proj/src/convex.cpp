#include "holo/convex.hpp"

#include <cmath>

#include "holo/lp.hpp"

namespace holo {

Eigen::VectorXd to_real(const CPoint& p) {
    Eigen::VectorXd x(2 * p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        x[2 * i] = p[i].real();
        x[2 * i + 1] = p[i].imag();
    }
    return x;
}

CPoint from_real(const Eigen::VectorXd& x) {
    if (x.size() % 2 != 0) throw Error("odd real dimension");
    CPoint p(static_cast<size_t>(x.size() / 2));
    for (size_t i = 0; i < p.size(); ++i) p[i] = cx(x[2 * i], x[2 * i + 1]);
    return p;
}

ConvexBody body_from_rows(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs) {
    if (rows.empty() || rows.size() != rhs.size()) throw Error("bad half-space description");
    ConvexBody F;
    F.A.resize(rows.size(), rows[0].size());
    F.b.resize(rhs.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw Error("ragged half-space rows");
        for (size_t j = 0; j < rows[i].size(); ++j) F.A(i, j) = rows[i][j];
        F.b[i] = rhs[i];
    }
    return F;
}

ConvexBody box_body(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const int d = static_cast<int>(lo.size());
    ConvexBody F;
    F.A = Eigen::MatrixXd::Zero(2 * d, d);
    F.b.resize(2 * d);
    for (int i = 0; i < d; ++i) {
        F.A(2 * i, i) = 1.0;
        F.b[2 * i] = hi[i];
        F.A(2 * i + 1, i) = -1.0;
        F.b[2 * i + 1] = -lo[i];
    }
    return F;
}

ConvexBody ball_body(const Eigen::VectorXd& center, double radius, int facets, unsigned seed) {
    const int d = static_cast<int>(center.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ConvexBody F;
    F.A.resize(facets + 2 * d, d);
    F.b.resize(facets + 2 * d);
    // axis-aligned faces first so small facet counts still bound the body
    for (int i = 0; i < d; ++i) {
        F.A.row(2 * i).setZero();
        F.A(2 * i, i) = 1.0;
        F.b[2 * i] = center[i] + radius;
        F.A.row(2 * i + 1).setZero();
        F.A(2 * i + 1, i) = -1.0;
        F.b[2 * i + 1] = -(center[i] - radius);
    }
    for (int f = 0; f < facets; ++f) {
        Eigen::VectorXd u(d);
        for (int i = 0; i < d; ++i) u[i] = gauss(rng);
        u.normalize();
        F.A.row(2 * d + f) = u.transpose();
        F.b[2 * d + f] = u.dot(center) + radius;
    }
    return F;
}

namespace {

lp::Problem feasibility_problem(const ConvexBody& F) {
    lp::Problem p;
    const int d = F.dim();
    p.c.assign(d, 0.0);
    p.signs.assign(d, lp::VarSign::Free);
    for (int i = 0; i < F.rows(); ++i) {
        std::vector<double> row(d);
        for (int j = 0; j < d; ++j) row[j] = F.A(i, j);
        p.add_row(std::move(row), F.b[i], lp::RowType::LE);
    }
    return p;
}

}  // namespace

bool body_feasible(const ConvexBody& F) {
    return lp::solve(feasibility_problem(F)).status == lp::Status::Optimal;
}

bool body_contains(const ConvexBody& F, const Eigen::VectorXd& x, double tol) {
    for (int i = 0; i < F.rows(); ++i) {
        double norm = F.A.row(i).norm();
        if (F.A.row(i).dot(x) - F.b[i] > tol * std::max(1.0, norm)) return false;
    }
    return true;
}

Eigen::VectorXd cheb_center(const ConvexBody& F, double* radius) {
    // max r s.t. A x + r ||A_i|| <= b  (x free, r >= 0)
    const int d = F.dim();
    lp::Problem p;
    p.c.assign(d + 1, 0.0);
    p.c[d] = -1.0;
    p.signs.assign(d + 1, lp::VarSign::Free);
    p.signs[d] = lp::VarSign::NonNeg;
    for (int i = 0; i < F.rows(); ++i) {
        std::vector<double> row(d + 1);
        for (int j = 0; j < d; ++j) row[j] = F.A(i, j);
        row[d] = F.A.row(i).norm();
        p.add_row(std::move(row), F.b[i], lp::RowType::LE);
    }
    // keep the LP bounded for unbounded bodies
    for (int j = 0; j < d; ++j) {
        std::vector<double> row(d + 1, 0.0);
        row[j] = 1.0;
        p.add_row(row, 1e6, lp::RowType::LE);
        row[j] = -1.0;
        p.add_row(row, 1e6, lp::RowType::LE);
    }
    {
        std::vector<double> row(d + 1, 0.0);
        row[d] = 1.0;
        p.add_row(row, 1e6, lp::RowType::LE);
    }
    auto res = lp::solve(p);
    if (res.status != lp::Status::Optimal) throw Error("empty body: no Chebyshev center");
    if (radius) *radius = res.x[d];
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = res.x[j];
    return x;
}

double point_distance(const ConvexBody& F, const Eigen::VectorXd& p) {
    if (body_contains(F, p, 1e-12)) return 0.0;
    const int d = F.dim();
    const int m = F.rows();
    Eigen::VectorXd x = p;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m, d);
    Eigen::MatrixXd An = F.A;
    Eigen::VectorXd bn = F.b;
    for (int i = 0; i < m; ++i) {
        double nrm = An.row(i).norm();
        if (nrm > 0) {
            An.row(i) /= nrm;
            bn[i] /= nrm;
        }
    }
    double prev = -1.0;
    for (int iter = 0; iter < 20000; ++iter) {
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd y = x + Q.row(i).transpose();
            double viol = An.row(i).dot(y) - bn[i];
            Eigen::VectorXd ynew = viol > 0 ? (y - viol * An.row(i).transpose()).eval() : y;
            Q.row(i) = (y - ynew).transpose();
            x = ynew;
        }
        double dist = (x - p).norm();
        if (iter > 3 && std::abs(dist - prev) < 1e-13 * std::max(1.0, dist)) break;
        prev = dist;
    }
    // Polish: project p onto the active affine set and accept if feasible.
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
        if (std::abs(An.row(i).dot(x) - bn[i]) < 1e-6) active.push_back(i);
    if (!active.empty()) {
        Eigen::MatrixXd Aact(active.size(), d);
        Eigen::VectorXd bact(active.size());
        for (size_t k = 0; k < active.size(); ++k) {
            Aact.row(k) = An.row(active[k]);
            bact[k] = bn[active[k]];
        }
        Eigen::VectorXd cand = p - Aact.transpose() * (Aact * Aact.transpose())
                                                          .completeOrthogonalDecomposition()
                                                          .solve(Aact * p - bact);
        if (body_contains(F, cand, 1e-9) && (cand - p).norm() <= (x - p).norm() + 1e-12)
            x = cand;
    }
    return (x - p).norm();
}

double body_distance(const ConvexBody& F, const std::vector<CPoint>& S) {
    if (S.empty()) throw Error("body_distance needs a non-empty point set");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : S) best = std::min(best, point_distance(F, to_real(s)));
    return best;
}

double max_support(const ConvexBody& F, const Eigen::VectorXd& u, bool* bounded) {
    const int d = F.dim();
    lp::Problem p;
    p.c.resize(d);
    for (int j = 0; j < d; ++j) p.c[j] = -u[j];  // maximize u.x
    p.signs.assign(d, lp::VarSign::Free);
    for (int i = 0; i < F.rows(); ++i) {
        std::vector<double> row(d);
        for (int j = 0; j < d; ++j) row[j] = F.A(i, j);
        p.add_row(std::move(row), F.b[i], lp::RowType::LE);
    }
    auto res = lp::solve(p);
    if (res.status == lp::Status::Infeasible) throw Error("max_support on empty body");
    if (res.status == lp::Status::Unbounded) {
        if (bounded) *bounded = false;
        return std::numeric_limits<double>::infinity();
    }
    if (bounded) *bounded = true;
    return -res.objective;
}

ConvexBody translate_body(const ConvexBody& F, const Eigen::VectorXd& t) {
    ConvexBody G = F;
    G.b += F.A * t;
    return G;
}

ConvexBody inflate_body(const ConvexBody& F, double rho) {
    ConvexBody G = F;
    for (int i = 0; i < F.rows(); ++i) G.b[i] += rho * F.A.row(i).norm();
    return G;
}

ConvexBody inflate_block(const ConvexBody& F, double rho, int lo, int hi) {
    ConvexBody G = F;
    for (int i = 0; i < F.rows(); ++i) G.b[i] += rho * F.A.row(i).segment(lo, hi - lo).norm();
    return G;
}

Eigen::MatrixXd complex_structure(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(2 * i, 2 * i + 1) = -1.0;
        J(2 * i + 1, 2 * i) = 1.0;
    }
    return J;
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& M) {
    const int n = static_cast<int>(M.rows());
    Eigen::MatrixXd R(2 * n, 2 * M.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < M.cols(); ++j) {
            R(2 * i, 2 * j) = M(i, j).real();
            R(2 * i, 2 * j + 1) = -M(i, j).imag();
            R(2 * i + 1, 2 * j) = M(i, j).imag();
            R(2 * i + 1, 2 * j + 1) = M(i, j).real();
        }
    return R;
}

ConvexBody affine_image(const ConvexBody& F, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t) {
    Eigen::MatrixXd R = realify(M);
    Eigen::VectorXd tr(2 * t.size());
    for (int i = 0; i < t.size(); ++i) {
        tr[2 * i] = t[i].real();
        tr[2 * i + 1] = t[i].imag();
    }
    Eigen::MatrixXd Rinv = R.inverse();
    ConvexBody G = F;
    G.A = F.A * Rinv;
    G.b = F.b + G.A * tr;
    return G;
}

namespace {

int matrix_rank(const Eigen::MatrixXd& M, double rel_tol = 1e-9) {
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    double cutoff = rel_tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++r;
    return r;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& M, double rel_tol = 1e-9) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = rel_tol * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++r;
    return svd.matrixV().rightCols(M.cols() - r);
}

}  // namespace

ConvexClass classify_condition_i(const ConvexBody& F, int n) {
    if (F.dim() != 2 * n) throw Error("dimension mismatch in classify_condition_i");
    if (!body_feasible(F)) throw Error("classify_condition_i on empty body");

    // implicit equalities: rows that are tight on all of F
    std::vector<int> eq;
    for (int i = 0; i < F.rows(); ++i) {
        bool bounded = false;
        double lo = -max_support(F, (-F.A.row(i).transpose()).eval(), &bounded);
        if (bounded && lo >= F.b[i] - 1e-9 * std::max(1.0, std::abs(F.b[i]))) eq.push_back(i);
    }
    if (!eq.empty()) {
        Eigen::MatrixXd E(eq.size(), F.dim());
        for (size_t k = 0; k < eq.size(); ++k) E.row(k) = F.A.row(eq[k]);
        Eigen::MatrixXd N = null_space(E);
        bool equals_hull = true;
        for (int i = 0; i < F.rows(); ++i) {
            if (std::find(eq.begin(), eq.end(), i) != eq.end()) continue;
            if ((N.transpose() * F.A.row(i).transpose()).norm() > 1e-9 * std::max(1.0, F.A.row(i).norm()))
                equals_hull = false;
        }
        if (equals_hull && N.cols() == 2 * n - 2) {
            // J-invariance of the direction space
            Eigen::MatrixXd J = complex_structure(n);
            Eigen::MatrixXd JN = J * N;
            // projection residual onto span(N)
            Eigen::MatrixXd P = N * (N.transpose() * N).inverse() * N.transpose();
            if ((JN - P * JN).norm() < 1e-9) return ConvexClass::Hyperplane;
        }
    }

    Eigen::MatrixXd J = complex_structure(n);
    Eigen::MatrixXd stacked(2 * F.rows(), F.dim());
    stacked.topRows(F.rows()) = F.A;
    stacked.bottomRows(F.rows()) = F.A * J;
    if (matrix_rank(stacked) < F.dim()) return ConvexClass::ContainsComplexLine;
    return ConvexClass::NoComplexLine;
}

CPoint AffineMap::apply(const CPoint& p) const {
    Eigen::VectorXcd z(p.size());
    for (size_t i = 0; i < p.size(); ++i) z[i] = p[i];
    Eigen::VectorXcd w = M * z + t;
    CPoint out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = w[i];
    return out;
}

namespace {

struct Separator {
    Eigen::VectorXcd lambda;  // complex-linear functional, Re lambda separates
    double sup_F;             // sup of Re lambda over F (Farkas bound)
    double min_G;             // min of Re lambda over the point set
};

// Re(sum w_i z_i) as a real functional u on R^{2n}: u_{2i} = Re w_i,
// u_{2i+1} = -Im w_i.
Eigen::VectorXcd functional_from_real(const Eigen::VectorXd& u) {
    Eigen::VectorXcd w(u.size() / 2);
    for (int i = 0; i < w.size(); ++i) w[i] = cx(u[2 * i], -u[2 * i + 1]);
    return w;
}

double re_functional(const Eigen::VectorXcd& w, const CPoint& p) {
    cx s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += w[static_cast<int>(i)] * p[i];
    return s.real();
}

// Farkas separation: find u with sup_F u.x <= a and u.g >= a + 1 for every g.
// Variables (u in R^d free, a free, y >= 0): A^T y = u, b^T y <= a,
// -u.g + a <= -1.
std::optional<Separator> separate(const ConvexBody& F, const std::vector<CPoint>& G) {
    const int d = F.dim();
    const int m = F.rows();
    lp::Problem p;
    const int nu = d, na = d, ny = d + 1;  // u at [0,d), a at d, y at [d+1, ...)
    (void)nu;
    (void)na;
    p.signs.assign(d + 1 + m, lp::VarSign::Free);
    for (int i = 0; i < m; ++i) p.signs[ny + i] = lp::VarSign::NonNeg;
    p.c.assign(d + 1 + m, 0.0);
    for (int i = 0; i < m; ++i) p.c[ny + i] = 1.0;  // keep multipliers small
    for (int j = 0; j < d; ++j) {
        std::vector<double> row(d + 1 + m, 0.0);
        row[j] = -1.0;
        for (int i = 0; i < m; ++i) row[ny + i] = F.A(i, j);
        p.add_row(std::move(row), 0.0, lp::RowType::EQ);
    }
    {
        std::vector<double> row(d + 1 + m, 0.0);
        row[d] = -1.0;
        for (int i = 0; i < m; ++i) row[ny + i] = F.b[i];
        p.add_row(std::move(row), 0.0, lp::RowType::LE);
    }
    for (const auto& g : G) {
        Eigen::VectorXd gr = to_real(g);
        std::vector<double> row(d + 1 + m, 0.0);
        for (int j = 0; j < d; ++j) row[j] = -gr[j];
        row[d] = 1.0;
        p.add_row(std::move(row), -1.0, lp::RowType::LE);
    }
    auto res = lp::solve(p);
    if (res.status != lp::Status::Optimal) return std::nullopt;
    Eigen::VectorXd u(d);
    for (int j = 0; j < d; ++j) u[j] = res.x[j];
    if (u.norm() < 1e-12) return std::nullopt;
    Separator s;
    s.lambda = functional_from_real(u);
    double supF = 0.0;
    for (int i = 0; i < m; ++i) supF += res.x[ny + i] * F.b[i];
    s.sup_F = supF;
    s.min_G = std::numeric_limits<double>::infinity();
    for (const auto& g : G) s.min_G = std::min(s.min_G, re_functional(s.lambda, g));
    return s;
}

}  // namespace

AffineMap normalize_separation(const ConvexBody& F, const std::vector<CPoint>& G,
                               const std::vector<CPoint>& extra) {
    const int n = F.dim() / 2;
    const std::vector<CPoint>& g1 = G.empty() ? extra : G;
    const std::vector<CPoint>& g2 = extra.empty() ? G : extra;
    if (g1.empty()) throw Error("normalize_separation needs at least one point");

    auto s1 = separate(F, g1);
    if (!s1) throw Error("cannot-normalize: no separating functional for the first coordinate");
    auto s2 = separate(F, g2);
    if (!s2) throw Error("cannot-normalize: no separating functional for the second coordinate");

    // normalized functionals: F side -> <= -1, point side -> >= 0
    auto build = [](const Separator& s) {
        double gap = s.min_G - s.sup_F;
        Eigen::VectorXcd lam = s.lambda / gap;
        cx shift = -s.min_G / gap;
        return std::pair<Eigen::VectorXcd, cx>(lam, shift);
    };
    auto [l1, c1] = build(*s1);
    auto [l2, c2] = build(*s2);

    // complex-linear independence of the two rows; nudge l2 if needed
    auto independent = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
        Eigen::MatrixXcd M(2, a.size());
        M.row(0) = a.transpose();
        M.row(1) = b.transpose();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        return svd.singularValues()[1] > 1e-9 * svd.singularValues()[0];
    };
    if (!independent(l1, l2)) {
        if (n == 1) throw Error("cannot-normalize in dimension 1");
        // Nudge one of the rows until they are complex-independent while the
        // separation survives.  Prefer nudging l1: downstream shears act on
        // the first coordinate, so keeping l2 free of extra coordinates keeps
        // the second-coordinate chain of the assembled curve shear-free.
        auto try_nudge = [&](Eigen::VectorXcd& l, cx& c, const Eigen::VectorXcd& other,
                             const std::vector<CPoint>& gset) {
            // axis least aligned with the fixed row serves as the complement
            Eigen::VectorXcd perp = Eigen::VectorXcd::Zero(n);
            {
                int k = 0;
                double best = std::numeric_limits<double>::infinity();
                for (int i = 0; i < n; ++i)
                    if (std::abs(other[i]) < best) {
                        best = std::abs(other[i]);
                        k = i;
                    }
                perp[k] = 1.0;
            }
            for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
                for (int rot = 0; rot < 16; ++rot) {
                    double ang = 2.0 * M_PI * rot / 16.0;
                    Eigen::VectorXcd cand = l + delta * std::polar(1.0, ang) * perp;
                    if (!independent(other, cand)) continue;
                    // re-check the two containments for the candidate
                    Eigen::VectorXd ur(2 * n);
                    for (int i = 0; i < n; ++i) {
                        ur[2 * i] = cand[i].real();
                        ur[2 * i + 1] = -cand[i].imag();
                    }
                    bool bounded = false;
                    double supF = max_support(F, ur, &bounded);
                    if (!bounded) continue;
                    double minG = std::numeric_limits<double>::infinity();
                    for (const auto& g : gset) minG = std::min(minG, re_functional(cand, g));
                    double gap = minG - supF;
                    if (gap < 1e-9) continue;
                    l = cand / gap;
                    c = -minG / gap;
                    return true;
                }
            }
            return false;
        };
        if (!try_nudge(l1, c1, l2, g1) && !try_nudge(l2, c2, l1, g2))
            throw Error("cannot-normalize: separating functionals are complex-dependent");
    }

    // complete to an invertible matrix
    AffineMap T;
    T.M = Eigen::MatrixXcd::Zero(n, n);
    T.t = Eigen::VectorXcd::Zero(n);
    T.M.row(0) = l1.transpose();
    T.M.row(1) = l2.transpose();
    T.t[0] = c1;
    T.t[1] = c2;
    if (n > 2) {
        // fill rows 2..n-1 with an orthonormal complement of span(l1, l2)
        Eigen::MatrixXcd B(n, 2);
        B.col(0) = l1.conjugate();
        B.col(1) = l2.conjugate();
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(B);
        Eigen::MatrixXcd Q = qr.householderQ();
        for (int r = 2; r < n; ++r) T.M.row(r) = Q.col(r).adjoint();
    }
    if (std::abs(Eigen::FullPivLU<Eigen::MatrixXcd>(T.M).determinant()) < 1e-12)
        throw Error("cannot-normalize: assembled affine map is singular");
    return T;
}

std::vector<Eigen::VectorXd> body_interior_samples(const ConvexBody& F, int count, std::mt19937_64& rng) {
    double r = 0.0;
    Eigen::VectorXd c = cheb_center(F, &r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        Eigen::VectorXd u(F.dim());
        for (int i = 0; i < F.dim(); ++i) u[i] = gauss(rng);
        u.normalize();
        double tmax = std::numeric_limits<double>::infinity();
        for (int i = 0; i < F.rows(); ++i) {
            double den = F.A.row(i).dot(u);
            if (den > 1e-12) tmax = std::min(tmax, (F.b[i] - F.A.row(i).dot(c)) / den);
        }
        if (!std::isfinite(tmax)) tmax = 1e3;
        out.push_back(c + (0.999 * unif(rng) * tmax) * u);
    }
    return out;
}

std::vector<Eigen::VectorXd> body_boundary_samples(const ConvexBody& F, int count, std::mt19937_64& rng) {
    double r = 0.0;
    Eigen::VectorXd c = cheb_center(F, &r);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard++ < 100 * count) {
        Eigen::VectorXd u(F.dim());
        for (int i = 0; i < F.dim(); ++i) u[i] = gauss(rng);
        u.normalize();
        double tmax = std::numeric_limits<double>::infinity();
        for (int i = 0; i < F.rows(); ++i) {
            double den = F.A.row(i).dot(u);
            if (den > 1e-12) tmax = std::min(tmax, (F.b[i] - F.A.row(i).dot(c)) / den);
        }
        if (!std::isfinite(tmax)) continue;  // unbounded direction
        out.push_back(c + tmax * u);
    }
    if (static_cast<int>(out.size()) < count)
        throw Error("body_boundary_samples: body unbounded in almost all directions");
    return out;
}

json body_to_json(const ConvexBody& F) {
    json hs = json::array();
    for (int i = 0; i < F.rows(); ++i) {
        json u = json::array();
        for (int j = 0; j < F.dim(); ++j) u.push_back(F.A(i, j));
        hs.push_back({{"u", u}, {"d", F.b[i]}});
    }
    json j{{"halfspaces", hs}};
    if (F.product_kl)
        j["product"] = {{"k", F.product_kl->first}, {"l", F.product_kl->second}};
    else
        j["product"] = nullptr;
    return j;
}

ConvexBody body_from_json(const json& j) {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& h : j.at("halfspaces")) {
        rows.push_back(h.at("u").get<std::vector<double>>());
        rhs.push_back(h.at("d").get<double>());
    }
    ConvexBody F = body_from_rows(rows, rhs);
    if (j.contains("product") && !j["product"].is_null())
        F.product_kl = {j["product"]["k"].get<int>(), j["product"]["l"].get<int>()};
    return F;
}

}  // namespace holo
