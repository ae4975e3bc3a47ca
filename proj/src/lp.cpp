#include "holo/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace holo::lp {

namespace {

constexpr double kTol = 1e-9;

// Standard-form tableau simplex with Bland's rule.
struct Tableau {
    int m, n;                          // rows, structural+slack+artificial cols
    std::vector<std::vector<double>> a;  // m x n
    std::vector<double> b;             // m
    std::vector<double> cost;          // n
    std::vector<int> basis;            // m
    std::vector<char> allowed;         // columns eligible to enter

    double reduced_cost_col(int j, const std::vector<double>& y) const {
        double r = cost[j];
        for (int i = 0; i < m; ++i) r -= y[i] * a[i][j];
        return r;
    }

    // Runs the simplex on the current cost vector. Returns false on
    // unboundedness.
    bool iterate() {
        const int iter_cap = 200 * (m + n) + 2000;
        for (int iter = 0; iter < iter_cap; ++iter) {
            // price: y = c_B B^-1 is implicit since we keep the tableau reduced
            int enter = -1;
            for (int j = 0; j < n; ++j) {
                if (allowed[j] && cost[j] < -kTol) { enter = j; break; }  // Bland: first index
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] > kTol) {
                    double ratio = b[i] / a[i][enter];
                    if (ratio < best - kTol || (std::abs(ratio - best) <= kTol &&
                                                (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex iteration cap exceeded");
    }

    void pivot(int r, int jc) {
        double p = a[r][jc];
        for (int j = 0; j < n; ++j) a[r][j] /= p;
        b[r] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = a[i][jc];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        double f = cost[jc];
        if (f != 0.0) {
            for (int j = 0; j < n; ++j) cost[j] -= f * a[r][j];
        }
        basis[r] = jc;
    }

    // Reduce the cost row against the current basis.
    void reduce_cost() {
        for (int i = 0; i < m; ++i) {
            double f = cost[basis[i]];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) cost[j] -= f * a[i][j];
        }
    }
};

}  // namespace

Result solve(const Problem& p) {
    const int nv = static_cast<int>(p.signs.size());
    const int m = static_cast<int>(p.rows.size());
    for (const auto& r : p.rows)
        if (static_cast<int>(r.size()) != nv) throw std::runtime_error("lp row size mismatch");

    // Column layout: for each variable, one (NonNeg) or two (Free, split) cols;
    // then one slack per LE row; then one artificial per row.
    std::vector<int> col_pos(nv), col_neg(nv, -1);
    int nc = 0;
    for (int v = 0; v < nv; ++v) {
        col_pos[v] = nc++;
        if (p.signs[v] == VarSign::Free) col_neg[v] = nc++;
    }
    const int slack0 = nc;
    int nslack = 0;
    for (int i = 0; i < m; ++i)
        if (p.types[i] == RowType::LE) ++nslack;
    nc += nslack;
    const int art0 = nc;
    nc += m;

    Tableau t;
    t.m = m;
    t.n = nc;
    t.a.assign(m, std::vector<double>(nc, 0.0));
    t.b.assign(m, 0.0);
    t.basis.assign(m, 0);

    int si = 0;
    for (int i = 0; i < m; ++i) {
        double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int v = 0; v < nv; ++v) {
            double coef = sign * p.rows[i][v];
            t.a[i][col_pos[v]] = coef;
            if (col_neg[v] >= 0) t.a[i][col_neg[v]] = -coef;
        }
        if (p.types[i] == RowType::LE) {
            t.a[i][slack0 + si] = sign * 1.0;
            ++si;
        }
        t.b[i] = sign * p.rhs[i];
        t.a[i][art0 + i] = 1.0;
        t.basis[i] = art0 + i;
    }

    // Phase 1: minimize sum of artificials.
    t.allowed.assign(nc, 1);
    t.cost.assign(nc, 0.0);
    for (int i = 0; i < m; ++i) t.cost[art0 + i] = 1.0;
    t.reduce_cost();
    if (!t.iterate()) throw std::runtime_error("phase-1 unbounded (impossible)");
    double phase1 = 0.0;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= art0) phase1 += t.b[i];
    Result res;
    if (phase1 > 1e-7) {
        res.status = Status::Infeasible;
        return res;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < art0) continue;
        int enter = -1;
        for (int j = 0; j < art0; ++j)
            if (std::abs(t.a[i][j]) > kTol) { enter = j; break; }
        if (enter >= 0) t.pivot(i, enter);
        // else: redundant row, the artificial stays at value ~0
    }

    // Phase 2: forbid artificials, restore the real objective.
    t.cost.assign(nc, 0.0);
    for (int v = 0; v < nv; ++v) {
        t.cost[col_pos[v]] = p.c[v];
        if (col_neg[v] >= 0) t.cost[col_neg[v]] = -p.c[v];
    }
    for (int i = art0; i < nc; ++i) t.allowed[i] = 0;
    t.reduce_cost();
    if (!t.iterate()) {
        res.status = Status::Unbounded;
        return res;
    }

    std::vector<double> xs(nc, 0.0);
    for (int i = 0; i < m; ++i) xs[t.basis[i]] = t.b[i];
    res.x.assign(nv, 0.0);
    res.objective = 0.0;
    for (int v = 0; v < nv; ++v) {
        res.x[v] = xs[col_pos[v]] - (col_neg[v] >= 0 ? xs[col_neg[v]] : 0.0);
        res.objective += p.c[v] * res.x[v];
    }
    res.status = Status::Optimal;
    return res;
}

}  // namespace holo::lp
