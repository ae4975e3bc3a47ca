#pragma once

#include <Eigen/Dense>

#include "holo/convex.hpp"
#include "holo/expr.hpp"

namespace holo {

/// Primitive automorphism of C^n:
///  - Affine: z -> M z + t, M invertible
///  - Shear(axis, f): z_axis += f(other coordinates, ascending order)
///  - Overshear(axis, f): z_axis *= exp(f(other coordinates))
///  - Twist(gamma), n = 2: (z1, z2) -> (z1 e^{g z1 z2}, z2 e^{-g z1 z2});
///    z1 z2 is invariant, so the exact inverse is Twist(-gamma).
struct PrimitiveAut {
    enum class Kind { Affine, Shear, Overshear, Twist };
    Kind kind;
    Eigen::MatrixXcd matrix;      // Affine
    Eigen::VectorXcd translation; // Affine
    int axis = 0;                 // Shear / Overshear
    ExprPtr f;                    // Shear / Overshear, arity n-1
    double gamma = 0.0;           // Twist

    static PrimitiveAut affine(Eigen::MatrixXcd M, Eigen::VectorXcd t);
    static PrimitiveAut shear(int axis, ExprPtr f);
    static PrimitiveAut overshear(int axis, ExprPtr f);
    static PrimitiveAut twist(double gamma);
};

struct CompositeAut {
    int n = 0;
    std::vector<PrimitiveAut> factors;  // applied left to right
};

/// Union of at most n-1 complex hyperplanes {<normal, z> = offset}. When
/// `normalized` each is a coordinate hyperplane {z_i = 0}; `coord_axes` then
/// lists the axes.
struct HyperplaneUnion {
    int n = 0;
    std::vector<std::pair<CPoint, cx>> hyperplanes;
    bool normalized = false;
    std::vector<int> coord_axes;
};

/// The union of coordinate hyperplanes {z_i = 0}, i in axes.
HyperplaneUnion coord_hyperplanes(int n, std::vector<int> axes);
/// True when p lies on one of the hyperplanes (tolerance tol).
bool on_hyperplanes(const HyperplaneUnion& H, const CPoint& p, double tol = 1e-9);

CPoint apply_primitive(const PrimitiveAut& a, const CPoint& z);
CPoint apply_aut(const CompositeAut& a, const CPoint& z);
CompositeAut invert_aut(const CompositeAut& a);
/// Apply a, then b.
CompositeAut compose_aut(const CompositeAut& a, const CompositeAut& b);

/// Substitutes component expressions through the automorphism, producing the
/// composed component trees.
std::vector<ExprPtr> apply_to_exprs(const CompositeAut& a, std::vector<ExprPtr> comps);

/// Structural check first (product factors in f), sampling fallback
/// (200 points per hyperplane, tolerance 1e-9).
bool fixes_hyperplanes(const CompositeAut& a, const HyperplaneUnion& H);

/// The Prop-1 line-case gadget: choose gamma from the candidate grid so the
/// images of the given points (n = 2) have pairwise distinct second
/// coordinates, maximizing the min gap; ties break toward smaller gamma.
std::pair<CompositeAut, double> gamma_separation(const std::vector<CPoint>& points,
                                                 const std::vector<double>& candidates);
std::vector<double> default_gamma_grid();

/// Composite of product-form overshears after which, for every
/// n-1 coordinate subset, the coordinate products are pairwise distinct
/// across the points (min gap >= 1e-8); the working epsilon is halved until
/// the displacement on the point set is <= eps.
CompositeAut product_separation(const std::vector<CPoint>& points, double eps);

json aut_to_json(const CompositeAut& a);
CompositeAut aut_from_json(const json& j);

/// Index of original coordinate `coord` among the inputs of a shear f on
/// `axis` (inputs are the other coordinates in ascending order).
inline int shear_var_index(int axis, int coord) { return coord < axis ? coord : coord - 1; }

}  // namespace holo
