#include "gaplab/eigenvector_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "gaplab/error.hpp"

namespace gaplab {
namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency_lists(const SymmetricMatrix& a) {
    const std::size_t n = a.n();
    Adjacency adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i) != 0.0) throw Error(ErrorKind::InvalidConfig, "adjacency has a nonzero diagonal at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const double x = a(i, j);
            if (x == 1.0) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            } else if (x != 0.0) {
                throw Error(ErrorKind::InvalidConfig, "adjacency entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                                          ") is not 0 or 1");
            }
        }
    }
    return adj;
}

// Components of the subgraph induced on {i : keep(i)}.
std::vector<VertexSet> components(const Adjacency& adj, const std::function<bool(std::size_t)>& keep) {
    const std::size_t n = adj.size();
    std::vector<char> seen(n, 0);
    std::vector<VertexSet> out;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s] || !keep(s)) continue;
        VertexSet comp;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (std::size_t w : adj[u]) {
                if (!seen[w] && keep(w)) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<VertexSet> domains(const Adjacency& adj, std::span<const double> v, NodalMode mode, double tol) {
    std::vector<VertexSet> pos, neg;
    if (mode == NodalMode::strong) {
        pos = components(adj, [&](std::size_t i) { return v[i] > tol; });
        neg = components(adj, [&](std::size_t i) { return v[i] < -tol; });
    } else {
        pos = components(adj, [&](std::size_t i) { return v[i] >= -tol; });
        neg = components(adj, [&](std::size_t i) { return v[i] <= tol; });
    }
    pos.insert(pos.end(), neg.begin(), neg.end());
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (mode == NodalMode::strong) return pos;
    // an all-zero component of one sign class can sit inside a component of
    // the other; it is then not maximal
    std::vector<VertexSet> out;
    for (const auto& s : pos) {
        const bool nested = std::any_of(pos.begin(), pos.end(), [&](const VertexSet& o) {
            return o.size() > s.size() && std::includes(o.begin(), o.end(), s.begin(), s.end());
        });
        if (!nested) out.push_back(s);
    }
    return out;
}

}  // namespace

std::size_t delocalization_count(std::span<const double> v, double threshold) {
    if (!(threshold > 0.0)) throw Error(ErrorKind::InvalidConfig, "delocalization threshold must be positive");
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double x) { return std::abs(x) >= threshold; }));
}

DelocalizationProfile delocalization_profile(const Spectrum& s, double threshold) {
    if (!s.has_vectors()) throw Error(ErrorKind::InvalidConfig, "delocalization_profile needs eigenvectors");
    DelocalizationProfile p;
    p.threshold = threshold;
    p.min_count = s.n();
    for (std::size_t j = 0; j < s.n(); ++j) {
        p.counts.push_back(delocalization_count(s.vector(j), threshold));
        p.min_count = std::min(p.min_count, p.counts.back());
    }
    return p;
}

double mass_concentration(std::span<const double> v, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorKind::InvalidConfig, "fraction must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(v.size()) + 1e-9));
    if (k == 0) throw Error(ErrorKind::InvalidConfig, "floor(fraction n) is zero");
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [](double x) { return x * x; });
    std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k - 1), sq.end(), std::greater<>());
    std::sort(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(k), std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += sq[i];
    return sum;
}

MinAbsCoordinate min_abs_coordinate(std::span<const double> v) {
    MinAbsCoordinate m{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) < m.value) m = {std::abs(v[i]), i};
    }
    if (v.empty()) m.value = 0.0;
    return m;
}

std::vector<VertexSet> nodal_domains(const SymmetricMatrix& adjacency, std::span<const double> v, NodalMode mode,
                                     double zero_tol) {
    if (v.size() != adjacency.n()) throw Error(ErrorKind::DimensionMismatch, "vector length differs from the graph order");
    if (!(zero_tol >= 0.0)) throw Error(ErrorKind::InvalidConfig, "zero_tol must be >= 0");
    return domains(adjacency_lists(adjacency), v, mode, zero_tol);
}

double default_zero_tol(std::size_t n) { return 1e-10 * std::sqrt(static_cast<double>(n)); }

NodalReport nodal_report(const SymmetricMatrix& adjacency, const Spectrum& s) {
    return nodal_report(adjacency, s, default_zero_tol(adjacency.n()));
}

NodalReport nodal_report(const SymmetricMatrix& adjacency, const Spectrum& s, double zero_tol) {
    if (s.n() != adjacency.n()) throw Error(ErrorKind::DimensionMismatch, "spectrum and graph differ in order");
    if (!s.has_vectors()) throw Error(ErrorKind::InvalidConfig, "nodal_report needs eigenvectors");
    if (!(zero_tol >= 0.0)) throw Error(ErrorKind::InvalidConfig, "zero_tol must be >= 0");
    const Adjacency adj = adjacency_lists(adjacency);
    NodalReport report;
    report.zero_tol = zero_tol;
    for (std::size_t j = 0; j < s.n(); ++j) {
        const auto v = s.vector(j);
        EigenvectorNodal e;
        e.index = j;
        e.eigenvalue = s.value(j);
        e.min_abs = min_abs_coordinate(v);
        e.strong = domains(adj, v, NodalMode::strong, zero_tol);
        e.weak = domains(adj, v, NodalMode::weak, zero_tol);
        report.eigenvectors.push_back(std::move(e));
    }
    return report;
}

bool domains_consistent(const EigenvectorNodal& e, std::span<const double> v, double zero_tol) {
    std::vector<char> used(v.size(), 0);
    for (const auto& d : e.strong) {
        for (std::size_t i : d) {
            if (used[i]) return false;
            used[i] = 1;
        }
        const bool positive = v[d.front()] > zero_tol;
        std::size_t containing = 0;
        for (const auto& w : e.weak) {
            const bool inside = std::includes(w.begin(), w.end(), d.begin(), d.end());
            if (!inside) continue;
            // a weak domain has the sign of the strong domain when it avoids the opposite strict sign
            const bool same_sign = std::all_of(w.begin(), w.end(), [&](std::size_t i) {
                return positive ? v[i] >= -zero_tol : v[i] <= zero_tol;
            });
            if (same_sign) ++containing;
        }
        if (containing != 1) return false;
    }
    return true;
}

}  // namespace gaplab
