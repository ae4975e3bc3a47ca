#include "holo/expr.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace holo {

namespace {

int max_arity(const std::vector<ExprPtr>& args) {
    int a = 0;
    for (const auto& e : args) a = std::max(a, e->arity);
    return a;
}

bool finite(cx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

namespace ex {

ExprPtr cst(cx c) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Const;
    e->value = c;
    return e;
}

ExprPtr var(int index) {
    if (index < 0) throw Error("negative variable index");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    e->var_index = index;
    e->arity = index + 1;
    return e;
}

ExprPtr add(std::vector<ExprPtr> args) {
    if (args.empty()) return cst(0.0);
    if (args.size() == 1) return args[0];
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Add;
    e->arity = max_arity(args);
    e->args = std::move(args);
    return e;
}

ExprPtr add(ExprPtr a, ExprPtr b) { return add(std::vector<ExprPtr>{std::move(a), std::move(b)}); }

ExprPtr mul(std::vector<ExprPtr> args) {
    if (args.empty()) return cst(1.0);
    if (args.size() == 1) return args[0];
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Mul;
    e->arity = max_arity(args);
    e->args = std::move(args);
    return e;
}

ExprPtr mul(ExprPtr a, ExprPtr b) { return mul(std::vector<ExprPtr>{std::move(a), std::move(b)}); }

ExprPtr neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Neg;
    e->arity = a->arity;
    e->args = {std::move(a)};
    return e;
}

ExprPtr exp(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Exp;
    e->arity = a->arity;
    e->args = {std::move(a)};
    return e;
}

ExprPtr poly(std::vector<cx> coeffs, ExprPtr child) {
    if (coeffs.empty()) throw Error("empty polynomial coefficient list");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Poly;
    e->arity = child->arity;
    e->args = {std::move(child)};
    e->coeffs = std::move(coeffs);
    return e;
}

ExprPtr scale(cx c, ExprPtr a) {
    if (c == cx(1.0)) return a;
    return mul(cst(c), std::move(a));
}

ExprPtr shift(ExprPtr a, cx c) {
    if (c == cx(0.0)) return a;
    return add(std::move(a), cst(c));
}

}  // namespace ex

namespace {

// Per-call memo: composed automorphism trees are DAGs with heavy sharing,
// and an uncached walk revisits shared subtrees exponentially often.
using EvalMemo = std::unordered_map<const Expr*, cx>;

cx eval_rec(const Expr& e, std::span<const cx> z, std::string& path, EvalMemo& memo) {
    if (auto it = memo.find(&e); it != memo.end()) return it->second;
    cx out;
    switch (e.kind) {
        case Expr::Kind::Const:
            out = e.value;
            break;
        case Expr::Kind::Var:
            out = z[static_cast<size_t>(e.var_index)];
            break;
        case Expr::Kind::Add: {
            out = 0.0;
            const size_t keep = path.size();
            for (size_t i = 0; i < e.args.size(); ++i) {
                path += "add[" + std::to_string(i) + "].";
                out += eval_rec(*e.args[i], z, path, memo);
                path.resize(keep);
            }
            break;
        }
        case Expr::Kind::Mul: {
            out = 1.0;
            const size_t keep = path.size();
            for (size_t i = 0; i < e.args.size(); ++i) {
                path += "mul[" + std::to_string(i) + "].";
                out *= eval_rec(*e.args[i], z, path, memo);
                path.resize(keep);
            }
            break;
        }
        case Expr::Kind::Neg:
            path += "neg.";
            out = -eval_rec(*e.args[0], z, path, memo);
            path.resize(path.size() - 4);
            break;
        case Expr::Kind::Exp: {
            path += "exp.";
            cx a = eval_rec(*e.args[0], z, path, memo);
            path.resize(path.size() - 4);
            if (a.real() > kExpRealCap) throw OverflowError(path + "exp");
            out = std::exp(a);
            break;
        }
        case Expr::Kind::Poly: {
            path += "poly.";
            cx a = eval_rec(*e.args[0], z, path, memo);
            path.resize(path.size() - 5);
            out = 0.0;
            for (size_t i = e.coeffs.size(); i-- > 0;) out = out * a + e.coeffs[i];
            break;
        }
    }
    if (!finite(out)) throw OverflowError(path + "<result>");
    memo.emplace(&e, out);
    return out;
}

}  // namespace

cx eval_expr(const Expr& expr, std::span<const cx> z) {
    if (static_cast<int>(z.size()) < expr.arity)
        throw Error("arity mismatch: expression needs " + std::to_string(expr.arity) +
                    " inputs, got " + std::to_string(z.size()));
    std::string path;
    EvalMemo memo;
    return eval_rec(expr, z, path, memo);
}

namespace {

using Series = std::vector<cx>;  // Taylor coefficients about the base point

void check_series(const Series& s, const char* where) {
    for (cx v : s)
        if (!finite(v)) throw OverflowError(std::string(where));
}

Series series_add(const Series& a, const Series& b) {
    Series r(a.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Series series_mul(const Series& a, const Series& b) {
    Series r(a.size(), 0.0);
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// b = exp(a): b0 = exp(a0), k*b_k = sum_{j=1..k} j*a_j*b_{k-j}
Series series_exp(const Series& a) {
    if (a[0].real() > kExpRealCap) throw OverflowError("exp");
    Series b(a.size(), 0.0);
    b[0] = std::exp(a[0]);
    for (size_t k = 1; k < a.size(); ++k) {
        cx s = 0.0;
        for (size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * b[k - j];
        b[k] = s / static_cast<double>(k);
    }
    return b;
}

using SeriesMemo = std::unordered_map<const Expr*, Series>;

Series series_rec(const Expr& e, const Series& x, SeriesMemo& memo) {
    if (auto it = memo.find(&e); it != memo.end()) return it->second;
    Series out = [&]() -> Series {
    switch (e.kind) {
        case Expr::Kind::Const: {
            Series r(x.size(), 0.0);
            r[0] = e.value;
            return r;
        }
        case Expr::Kind::Var:
            return x;
        case Expr::Kind::Add: {
            Series r(x.size(), 0.0);
            for (const auto& c : e.args) r = series_add(r, series_rec(*c, x, memo));
            return r;
        }
        case Expr::Kind::Mul: {
            Series r(x.size(), 0.0);
            r[0] = 1.0;
            for (const auto& c : e.args) r = series_mul(r, series_rec(*c, x, memo));
            return r;
        }
        case Expr::Kind::Neg: {
            Series r = series_rec(*e.args[0], x, memo);
            for (cx& v : r) v = -v;
            return r;
        }
        case Expr::Kind::Exp: {
            Series r = series_exp(series_rec(*e.args[0], x, memo));
            check_series(r, "exp");
            return r;
        }
        case Expr::Kind::Poly: {
            Series a = series_rec(*e.args[0], x, memo);
            Series r(x.size(), 0.0);
            for (size_t i = e.coeffs.size(); i-- > 0;) {
                r = series_mul(r, a);
                r[0] += e.coeffs[i];
            }
            check_series(r, "poly");
            return r;
        }
    }
    throw Error("unreachable");
    }();
    memo.emplace(&e, out);
    return out;
}

}  // namespace

Jet eval_jet(const Expr& expr, cx z, int order) {
    if (expr.arity > 1) throw Error("eval_jet requires an arity-1 expression");
    if (order < 0) throw Error("negative jet order");
    Series x(static_cast<size_t>(order) + 1, 0.0);
    x[0] = z;
    if (order >= 1) x[1] = 1.0;
    SeriesMemo memo;
    Series s = series_rec(expr, x, memo);
    check_series(s, "jet");
    Jet jet;
    jet.point = z;
    jet.values.resize(s.size());
    double fact = 1.0;
    for (size_t k = 0; k < s.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        jet.values[k] = s[k] * fact;
    }
    return jet;
}

namespace {

using SubstMemo = std::unordered_map<const Expr*, ExprPtr>;

// Memoized: substitution must preserve the sharing of the input DAG, or
// composed automorphism chains blow up to true trees.
ExprPtr subst_rec(const ExprPtr& expr, const std::vector<ExprPtr>& replacements,
                  SubstMemo& memo);

}  // namespace

ExprPtr subst(const ExprPtr& expr, const std::vector<ExprPtr>& replacements) {
    SubstMemo memo;
    return subst_rec(expr, replacements, memo);
}

namespace {

ExprPtr subst_rec(const ExprPtr& expr, const std::vector<ExprPtr>& replacements,
                  SubstMemo& memo) {
    if (auto it = memo.find(expr.get()); it != memo.end()) return it->second;
    const Expr& e = *expr;
    ExprPtr out;
    switch (e.kind) {
        case Expr::Kind::Const:
            out = expr;
            break;
        case Expr::Kind::Var: {
            if (e.var_index >= static_cast<int>(replacements.size()))
                throw Error("substitution is missing variable " + std::to_string(e.var_index));
            out = replacements[static_cast<size_t>(e.var_index)];
            break;
        }
        case Expr::Kind::Add: {
            std::vector<ExprPtr> args;
            args.reserve(e.args.size());
            for (const auto& c : e.args) args.push_back(subst_rec(c, replacements, memo));
            out = ex::add(std::move(args));
            break;
        }
        case Expr::Kind::Mul: {
            std::vector<ExprPtr> args;
            args.reserve(e.args.size());
            for (const auto& c : e.args) args.push_back(subst_rec(c, replacements, memo));
            out = ex::mul(std::move(args));
            break;
        }
        case Expr::Kind::Neg:
            out = ex::neg(subst_rec(e.args[0], replacements, memo));
            break;
        case Expr::Kind::Exp:
            out = ex::exp(subst_rec(e.args[0], replacements, memo));
            break;
        case Expr::Kind::Poly:
            out = ex::poly(e.coeffs, subst_rec(e.args[0], replacements, memo));
            break;
    }
    if (!out) throw Error("unreachable");
    memo.emplace(expr.get(), out);
    return out;
}

}  // namespace

bool structurally_nonvanishing(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Exp:
            return true;
        case Expr::Kind::Const:
            return e->value != cx(0.0);
        case Expr::Kind::Neg:
            return structurally_nonvanishing(e->args[0]);
        case Expr::Kind::Mul:
            return std::all_of(e->args.begin(), e->args.end(), structurally_nonvanishing);
        default:
            return false;
    }
}

bool vanishes_on_var(const ExprPtr& e, int i) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return e->value == cx(0.0);
        case Expr::Kind::Var:
            return e->var_index == i;
        case Expr::Kind::Add:
        case Expr::Kind::Neg:
            return std::all_of(e->args.begin(), e->args.end(),
                               [i](const ExprPtr& c) { return vanishes_on_var(c, i); });
        case Expr::Kind::Mul:
            return std::any_of(e->args.begin(), e->args.end(),
                               [i](const ExprPtr& c) { return vanishes_on_var(c, i); });
        case Expr::Kind::Poly:
            return e->coeffs[0] == cx(0.0) && vanishes_on_var(e->args[0], i);
        case Expr::Kind::Exp:
            return false;
    }
    return false;
}

namespace {

json cx_to_json(cx v) { return json::array({v.real(), v.imag()}); }

cx cx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json expr_to_json(const ExprPtr& e) {
    json j;
    switch (e->kind) {
        case Expr::Kind::Const:
            j["op"] = "const";
            j["value"] = cx_to_json(e->value);
            break;
        case Expr::Kind::Var:
            j["op"] = "var";
            j["index"] = e->var_index;
            break;
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            j["op"] = e->kind == Expr::Kind::Add ? "add" : "mul";
            json args = json::array();
            for (const auto& c : e->args) args.push_back(expr_to_json(c));
            j["args"] = std::move(args);
            break;
        }
        case Expr::Kind::Neg:
            j["op"] = "neg";
            j["arg"] = expr_to_json(e->args[0]);
            break;
        case Expr::Kind::Exp:
            j["op"] = "exp";
            j["arg"] = expr_to_json(e->args[0]);
            break;
        case Expr::Kind::Poly: {
            j["op"] = "poly";
            json coeffs = json::array();
            for (cx c : e->coeffs) coeffs.push_back(cx_to_json(c));
            j["coeffs"] = std::move(coeffs);
            j["arg"] = expr_to_json(e->args[0]);
            break;
        }
    }
    return j;
}

ExprPtr expr_from_json(const json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "const") return ex::cst(cx_from_json(j.at("value")));
    if (op == "var") return ex::var(j.at("index").get<int>());
    if (op == "add" || op == "mul") {
        std::vector<ExprPtr> args;
        for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
        return op == "add" ? ex::add(std::move(args)) : ex::mul(std::move(args));
    }
    if (op == "neg") return ex::neg(expr_from_json(j.at("arg")));
    if (op == "exp") return ex::exp(expr_from_json(j.at("arg")));
    if (op == "poly") {
        std::vector<cx> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(cx_from_json(c));
        return ex::poly(std::move(coeffs), expr_from_json(j.at("arg")));
    }
    throw Error("unknown expression op '" + op + "'");
}

}  // namespace holo
