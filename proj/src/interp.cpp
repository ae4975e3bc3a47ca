#include "holo/interp.hpp"

#include <cmath>

namespace holo {

namespace {

// Newton form on the (possibly repeated) node list: divided differences with
// confluency handled via derivative columns.
std::vector<cx> newton_coefficients(const std::vector<cx>& pts, const std::vector<std::vector<cx>>& derivs,
                                    const std::vector<size_t>& group) {
    // pts: full node list with repetitions, group[i]: index of the jet the
    // i-th slot belongs to, derivs[g][k] = f^(k)(point_g)/k! (scaled).
    const size_t n = pts.size();
    std::vector<cx> dd(n);
    std::vector<cx> col(n);
    // column 0
    for (size_t i = 0; i < n; ++i) col[i] = derivs[group[i]][0];
    dd[0] = col[0];
    std::vector<size_t> rep(n, 0);  // repetition depth of slot i at current column
    for (size_t j = 1; j < n; ++j) {
        for (size_t i = n - 1; i >= j; --i) {
            if (pts[i] == pts[i - j] && group[i] == group[i - j]) {
                // confluent entry: scaled derivative of order j
                col[i] = derivs[group[i]][j];
            } else {
                col[i] = (col[i] - col[i - 1]) / (pts[i] - pts[i - j]);
            }
            if (i == j) break;
        }
        dd[j] = col[j];
    }
    (void)rep;
    return dd;
}

}  // namespace

std::vector<cx> hermite_coefficients(const std::vector<Jet>& jets) {
    if (jets.empty()) throw Error("no interpolation data");
    std::vector<cx> pts;
    std::vector<size_t> group;
    std::vector<std::vector<cx>> derivs;
    for (size_t g = 0; g < jets.size(); ++g) {
        const Jet& j = jets[g];
        if (j.values.empty()) throw Error("empty jet");
        std::vector<cx> scaled(j.values.size());
        double fact = 1.0;
        for (size_t k = 0; k < j.values.size(); ++k) {
            if (k > 0) fact *= static_cast<double>(k);
            scaled[k] = j.values[k] / fact;
        }
        derivs.push_back(std::move(scaled));
        for (size_t k = 0; k < j.values.size(); ++k) {
            pts.push_back(j.point);
            group.push_back(g);
        }
    }
    for (size_t a = 0; a < jets.size(); ++a)
        for (size_t b = a + 1; b < jets.size(); ++b)
            if (std::abs(jets[a].point - jets[b].point) < 1e-12)
                throw Error("degenerate-nodes: interpolation points closer than 1e-12");
    if (pts.size() > static_cast<size_t>(kInterpDegreeCap) + 1)
        throw Error("interpolation degree exceeds cap " + std::to_string(kInterpDegreeCap));

    std::vector<cx> dd = newton_coefficients(pts, derivs, group);

    // Expand Newton form sum dd[j] * prod_{i<j}(z - pts[i]) to monomials.
    std::vector<cx> mono{dd.empty() ? cx(0.0) : dd[0]};
    std::vector<cx> basis{1.0};  // prod_{i<j}(z - pts[i])
    for (size_t j = 1; j < dd.size(); ++j) {
        // basis *= (z - pts[j-1])
        std::vector<cx> nb(basis.size() + 1, 0.0);
        for (size_t i = 0; i < basis.size(); ++i) {
            nb[i + 1] += basis[i];
            nb[i] -= basis[i] * pts[j - 1];
        }
        basis = std::move(nb);
        if (mono.size() < basis.size()) mono.resize(basis.size(), 0.0);
        for (size_t i = 0; i < basis.size(); ++i) mono[i] += dd[j] * basis[i];
    }
    return mono;
}

ExprPtr hermite_interpolant(const std::vector<Jet>& jets) {
    return ex::poly(hermite_coefficients(jets), ex::var(0));
}

ExprPtr lagrange_interpolant(const std::vector<cx>& nodes, const std::vector<cx>& values) {
    if (nodes.size() != values.size() || nodes.empty())
        throw Error("lagrange_interpolant needs equal non-empty node/value lists");
    std::vector<Jet> jets(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        jets[i].point = nodes[i];
        jets[i].values = {values[i]};
    }
    return hermite_interpolant(jets);
}

}  // namespace holo
