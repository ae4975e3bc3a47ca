#pragma once

#include <vector>

namespace holo {

/// Small dense two-phase simplex for the desk-scale separation and
/// classification problems in this project (dimensions <= ~12, rows <= ~128).
/// Minimizes c.x subject to typed rows and per-variable sign restrictions.
namespace lp {

enum class RowType { LE, EQ };
enum class VarSign { Free, NonNeg };
enum class Status { Optimal, Infeasible, Unbounded };

struct Problem {
    std::vector<double> c;                  // objective, minimized
    std::vector<std::vector<double>> rows;  // coefficient rows
    std::vector<double> rhs;
    std::vector<RowType> types;
    std::vector<VarSign> signs;             // one per variable

    void add_row(std::vector<double> a, double b, RowType t) {
        rows.push_back(std::move(a));
        rhs.push_back(b);
        types.push_back(t);
    }
};

struct Result {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

Result solve(const Problem& p);

}  // namespace lp
}  // namespace holo
