#pragma once

#include "holo/expr.hpp"

namespace holo {

// Degree cap for returned interpolants; beyond this the Newton expansion to
// monomial coefficients is no longer trustworthy in double precision.
inline constexpr int kInterpDegreeCap = 64;

/// Polynomial of degree < nodes.size() with p(nodes[i]) = values[i].
/// Throws on duplicate nodes (min pairwise distance < 1e-12) or when the
/// degree cap is exceeded. Returns a Poly node over Var(0).
ExprPtr lagrange_interpolant(const std::vector<cx>& nodes, const std::vector<cx>& values);

/// Confluent (Hermite) variant: for every jet, matches value and derivatives
/// up to jet.values.size()-1 at jet.point. Minimal degree.
ExprPtr hermite_interpolant(const std::vector<Jet>& jets);

/// Monomial coefficients of the minimal interpolant, ascending powers.
std::vector<cx> hermite_coefficients(const std::vector<Jet>& jets);

}  // namespace holo
