#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace holo {

using cx = std::complex<double>;
using json = nlohmann::json;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an evaluation leaves the finite double range. Carries the
/// path of the offending node so certificates never see Inf/NaN.
struct OverflowError : Error {
    std::string node_path;
    explicit OverflowError(std::string path)
        : Error("overflow at node " + path), node_path(std::move(path)) {}
};

// Exponent real parts beyond this are reported as overflow instead of Inf.
inline constexpr double kExpRealCap = 700.0;

/// Closed expression tree for an entire function of one or several complex
/// variables. Nodes: Const, Var(i), Add, Mul, Neg, Exp, Poly(coeffs, child).
/// No division and no branch-cut primitives, so every tree is entire.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Var, Add, Mul, Neg, Exp, Poly };

    Kind kind;
    cx value{};                   // Const
    int var_index = -1;           // Var
    std::vector<ExprPtr> args;    // Add/Mul (n-ary), Neg/Exp/Poly (single child)
    std::vector<cx> coeffs;       // Poly, ascending powers, non-empty
    int arity = 0;                // number of input variables required
};

namespace ex {

ExprPtr cst(cx c);
ExprPtr var(int index);
ExprPtr add(std::vector<ExprPtr> args);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr mul(std::vector<ExprPtr> args);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr exp(ExprPtr a);
ExprPtr poly(std::vector<cx> coeffs, ExprPtr child);

/// a + c, a * c conveniences
ExprPtr scale(cx c, ExprPtr a);
ExprPtr shift(ExprPtr a, cx c);

}  // namespace ex

/// Value plus derivatives 0..m at a point.
struct Jet {
    cx point{};
    std::vector<cx> values;  // values[k] = f^(k)(point)
};

cx eval_expr(const Expr& expr, std::span<const cx> z);
inline cx eval_expr(const ExprPtr& e, std::span<const cx> z) { return eval_expr(*e, z); }
inline cx eval1(const ExprPtr& e, cx z) { return eval_expr(*e, std::span<const cx>(&z, 1)); }

/// Forward-propagated truncated Taylor series; requires arity <= 1.
Jet eval_jet(const Expr& expr, cx z, int order);
inline Jet eval_jet(const ExprPtr& e, cx z, int order) { return eval_jet(*e, z, order); }

/// f'(z) for arity-1 expressions.
inline cx eval_deriv(const ExprPtr& e, cx z) { return eval_jet(*e, z, 1).values[1]; }

/// Substitute replacements[i] for Var(i).
ExprPtr subst(const ExprPtr& expr, const std::vector<ExprPtr>& replacements);

/// Compose an arity-1 expression with an inner expression: f(g(.)).
inline ExprPtr compose1(const ExprPtr& f, const ExprPtr& g) { return subst(f, {g}); }

/// True when the tree can be seen to never vanish (Exp nodes, non-zero
/// constants, products of such).
bool structurally_nonvanishing(const ExprPtr& e);

/// True when the tree provably vanishes wherever input variable i is 0
/// (carries Var(i) as a product factor, in the structural sense).
bool vanishes_on_var(const ExprPtr& e, int i);

json expr_to_json(const ExprPtr& e);
ExprPtr expr_from_json(const json& j);

}  // namespace holo
