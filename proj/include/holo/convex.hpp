#pragma once

#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "holo/expr.hpp"

namespace holo {

/// Point of C^n.
using CPoint = std::vector<cx>;

Eigen::VectorXd to_real(const CPoint& p);
CPoint from_real(const Eigen::VectorXd& x);

/// Convex body as a finite intersection of real half-spaces <u, x> <= d on
/// R^{2n}. Optionally tagged as a product F x G with a k/l coordinate split.
struct ConvexBody {
    Eigen::MatrixXd A;  // m x 2n
    Eigen::VectorXd b;  // m
    std::optional<std::pair<int, int>> product_kl;

    int dim() const { return static_cast<int>(A.cols()); }
    int rows() const { return static_cast<int>(A.rows()); }
};

ConvexBody body_from_rows(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs);
ConvexBody box_body(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
/// Polytope outer/inscribed proxy of a Euclidean ball: tangent half-spaces in
/// `facets` deterministic directions (contains the ball, close for many facets).
ConvexBody ball_body(const Eigen::VectorXd& center, double radius, int facets, unsigned seed = 7);

bool body_feasible(const ConvexBody& F);
bool body_contains(const ConvexBody& F, const Eigen::VectorXd& x, double tol = 1e-9);
/// Chebyshev center; radius receives the inradius when non-null.
Eigen::VectorXd cheb_center(const ConvexBody& F, double* radius = nullptr);

/// Euclidean distance from a point to F (0 when inside).
double point_distance(const ConvexBody& F, const Eigen::VectorXd& p);
/// min over S of the distance to F.
double body_distance(const ConvexBody& F, const std::vector<CPoint>& S);

/// sup over F of <u, x>; bounded=false when the LP is unbounded.
double max_support(const ConvexBody& F, const Eigen::VectorXd& u, bool* bounded);

ConvexBody translate_body(const ConvexBody& F, const Eigen::VectorXd& t);
/// Minkowski-inflate by rho (unit-normalized rows).
ConvexBody inflate_body(const ConvexBody& F, double rho);
/// Inflate only in a contiguous real-coordinate block [lo, hi).
ConvexBody inflate_block(const ConvexBody& F, double rho, int lo, int hi);
/// Image of F under the complex affine map z -> M z + t (M invertible).
ConvexBody affine_image(const ConvexBody& F, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t);

enum class ConvexClass { Hyperplane, NoComplexLine, ContainsComplexLine };
ConvexClass classify_condition_i(const ConvexBody& F, int n);

/// The real 2n x 2n matrix of multiplication by i.
Eigen::MatrixXd complex_structure(int n);
/// Real representation of a complex matrix / the complex affine map action.
Eigen::MatrixXd realify(const Eigen::MatrixXcd& M);

struct AffineMap {
    Eigen::MatrixXcd M;
    Eigen::VectorXcd t;
    CPoint apply(const CPoint& p) const;
};

/// Complex affine T with T(F) in {Re z1 <= -1, Re z2 <= -1}, T(co(G)) in
/// {Re z1 >= 0} and T(extra) in {Re z2 >= 0}. Throws Error on failure.
AffineMap normalize_separation(const ConvexBody& F, const std::vector<CPoint>& G,
                               const std::vector<CPoint>& extra);

std::vector<Eigen::VectorXd> body_interior_samples(const ConvexBody& F, int count, std::mt19937_64& rng);
std::vector<Eigen::VectorXd> body_boundary_samples(const ConvexBody& F, int count, std::mt19937_64& rng);

json body_to_json(const ConvexBody& F);
ConvexBody body_from_json(const json& j);

}  // namespace holo
