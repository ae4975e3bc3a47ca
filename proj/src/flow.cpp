#include "holo/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace holo {

double weight_at(const FieldTerm& term, double t) {
    const auto& w = term.weight;
    return ((w[3] * t + w[2]) * t + w[1]) * t + w[0];
}

static void check_term(const FieldTerm& term, int n) {
    if (term.axis < 0 || term.axis >= n) throw Error("flow: term axis out of range");
    if (!term.g) throw Error("flow: term has no g");
    if (term.g->arity > n - 1) throw Error("flow: g arity exceeds n-1");
}

PrimitiveAut exact_flow(const FieldTerm& term, double s) {
    ExprPtr sg = ex::scale(cx(s), term.g);
    if (term.kind == FieldTerm::Kind::Shear) return PrimitiveAut::shear(term.axis, sg);
    return PrimitiveAut::overshear(term.axis, sg);
}

CompositeAut splitting_compose(const SplittingSchedule& sched) {
    if (sched.N < 1) throw Error("flow: N must be >= 1");
    if (sched.n < 2) throw Error("flow: n must be >= 2");
    for (const auto& t : sched.terms) check_term(t, sched.n);
    CompositeAut out;
    out.n = sched.n;
    const double h = 1.0 / sched.N;
    for (int j = 0; j < sched.N; ++j) {
        const double tj = static_cast<double>(j) / sched.N;
        for (const auto& term : sched.terms)
            out.factors.push_back(exact_flow(term, h * weight_at(term, tj)));
    }
    return out;
}

namespace {

using State = std::vector<cx>;

State field_velocity(const SplittingSchedule& sched, double t, const State& z) {
    State v(z.size(), cx(0.0));
    std::vector<cx> others(z.size() - 1);
    for (const auto& term : sched.terms) {
        int k = 0;
        for (int i = 0; i < static_cast<int>(z.size()); ++i)
            if (i != term.axis) others[k++] = z[i];
        cx g = eval_expr(term.g, others);
        cx vel = weight_at(term, t) * g;
        if (term.kind == FieldTerm::Kind::Overshear) vel *= z[term.axis];
        v[term.axis] += vel;
    }
    return v;
}

double state_dist(const State& a, const State& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Dormand-Prince 5(4) with standard step control.
State dopri_time_one(const SplittingSchedule& sched, State z, double tol) {
    static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0.0};
    static const double b4[7] = {5179.0 / 57600,   0.0,         7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    double t = 0.0, h = 0.05;
    const int dim = static_cast<int>(z.size());
    int guard = 0;
    while (t < 1.0) {
        if (++guard > 1000000) throw Error("flow: reference integrator failed to converge");
        h = std::min(h, 1.0 - t);
        State k[7];
        for (int s = 0; s < 7; ++s) {
            State zs = z;
            for (int p = 0; p < s; ++p)
                if (a[s][p] != 0.0)
                    for (int i = 0; i < dim; ++i) zs[i] += h * a[s][p] * k[p][i];
            k[s] = field_velocity(sched, t + c[s] * h, zs);
        }
        State z5 = z;
        double err = 0.0;
        for (int i = 0; i < dim; ++i) {
            cx d5(0.0), d4(0.0);
            for (int s = 0; s < 7; ++s) {
                d5 += b5[s] * k[s][i];
                d4 += b4[s] * k[s][i];
            }
            z5[i] += h * d5;
            err = std::max(err, std::abs(h * (d5 - d4)));
        }
        const double scale = tol * std::max(1.0, [&] {
            double m = 0.0;
            for (const cx& v : z) m = std::max(m, std::abs(v));
            return m;
        }());
        if (err <= scale) {
            t += h;
            z = std::move(z5);
        }
        const double ratio = err > 0 ? std::pow(scale / err, 0.2) : 5.0;
        h *= std::clamp(0.9 * ratio, 0.2, 5.0);
        if (h < 1e-14) throw Error("flow: reference step underflow");
    }
    return z;
}

}  // namespace

std::vector<CPoint> reference_time_one(const SplittingSchedule& sched,
                                       const std::vector<CPoint>& probes, double tol) {
    for (const auto& t : sched.terms) check_term(t, sched.n);
    std::vector<CPoint> out;
    out.reserve(probes.size());
    for (const auto& p : probes) {
        if (static_cast<int>(p.size()) != sched.n) throw Error("flow: probe dimension mismatch");
        out.push_back(dopri_time_one(sched, p, tol));
    }
    return out;
}

std::vector<ConvergenceRow> convergence_study(const SplittingSchedule& templ,
                                              std::vector<int> Ns,
                                              const std::vector<CPoint>& probes) {
    if (probes.empty()) throw Error("flow: no probes");
    std::sort(Ns.begin(), Ns.end());
    const std::vector<CPoint> ref = reference_time_one(templ, probes);
    std::vector<ConvergenceRow> rows;
    for (int N : Ns) {
        SplittingSchedule s = templ;
        s.N = N;
        const CompositeAut comp = splitting_compose(s);
        double err = 0.0;
        for (size_t i = 0; i < probes.size(); ++i)
            err = std::max(err, state_dist(apply_aut(comp, probes[i]), ref[i]));
        rows.push_back({N, err});
    }
    return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os << "N,error\n";
    os.precision(17);
    for (const auto& r : rows) os << r.N << "," << r.error << "\n";
    return os.str();
}

json schedule_to_json(const SplittingSchedule& s) {
    json terms = json::array();
    for (const auto& t : s.terms)
        terms.push_back({{"kind", t.kind == FieldTerm::Kind::Shear ? "shear" : "overshear"},
                         {"axis", t.axis},
                         {"g", expr_to_json(t.g)},
                         {"weight", t.weight}});
    return json{{"n", s.n}, {"N", s.N}, {"terms", terms}};
}

SplittingSchedule schedule_from_json(const json& j) {
    SplittingSchedule s;
    s.n = j.at("n").get<int>();
    s.N = j.at("N").get<int>();
    for (const auto& tj : j.at("terms")) {
        FieldTerm t;
        const std::string kind = tj.at("kind").get<std::string>();
        if (kind == "shear")
            t.kind = FieldTerm::Kind::Shear;
        else if (kind == "overshear")
            t.kind = FieldTerm::Kind::Overshear;
        else
            throw Error("flow: unknown term kind " + kind);
        t.axis = tj.at("axis").get<int>();
        t.g = expr_from_json(tj.at("g"));
        if (tj.contains("weight")) {
            auto w = tj.at("weight").get<std::vector<double>>();
            if (w.size() > 4) throw Error("flow: weight degree exceeds 3");
            t.weight = {0, 0, 0, 0};
            std::copy(w.begin(), w.end(), t.weight.begin());
        }
        s.terms.push_back(std::move(t));
    }
    return s;
}

}  // namespace holo
