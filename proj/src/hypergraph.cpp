// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/hypergraph.hpp"

#include "hyperact/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace hyperact {

WeightedHypergraph::WeightedHypergraph(std::size_t vertex_count, int degree)
    : vertex_count_(vertex_count), degree_(degree), incidence_(vertex_count) {
    if (degree < 2) throw Error(ErrorKind::InvalidArgument, "hyperedge degree must be >= 2");
}

std::size_t WeightedHypergraph::add_edge(std::span<const int> vertices, double weight) {
    if (vertices.size() != static_cast<std::size_t>(degree_)) {
        throw Error(ErrorKind::InvalidArgument, "edge size must equal the hypergraph degree");
    }
    std::vector<int> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::InvalidArgument, "edge repeats a vertex");
    }
    if (sorted.front() < 0 || static_cast<std::size_t>(sorted.back()) >= vertex_count_) {
        throw Error(ErrorKind::InvalidArgument, "edge vertex out of range");
    }
    const std::size_t index = weights_.size();
    vertices_.insert(vertices_.end(), sorted.begin(), sorted.end());
    weights_.push_back(std::isfinite(weight) ? std::max(0.0, weight) : 0.0);
    for (int v : sorted) incidence_[static_cast<std::size_t>(v)].push_back(index);
    return index;
}

std::string WeightedHypergraph::dump() const {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t e = 0; e < edge_count(); ++e) {
        os << "edge";
        for (int v : edge(e)) os << ' ' << v;
        os << ' ' << weights_[e] << '\n';
    }
    return os.str();
}

WeightedHypergraph WeightedHypergraph::parse(std::string_view text, std::size_t vertex_count, int degree) {
    WeightedHypergraph h(vertex_count, degree);
    std::istringstream is{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag != "edge") throw Error(ErrorKind::InputError, "line " + std::to_string(line_no) + ": expected 'edge'");
        std::vector<int> vs(static_cast<std::size_t>(degree));
        for (auto& v : vs) ls >> v;
        double w = 0.0;
        ls >> w;
        if (!ls) throw Error(ErrorKind::InputError, "line " + std::to_string(line_no) + ": malformed edge");
        h.add_edge(vs, w);
    }
    return h;
}

double normalized_weight(const WeightedHypergraph& h, std::span<const int> members) {
    if (members.empty()) return 0.0;
    std::vector<char> in(h.vertex_count(), 0);
    for (int v : members) in[static_cast<std::size_t>(v)] = 1;
    // Each enclosed edge is visited once through its smallest vertex.
    double total = 0.0;
    for (int v : members) {
        for (std::size_t e : h.incident(v)) {
            const auto verts = h.edge(e);
            if (verts.front() != v) continue;
            if (std::all_of(verts.begin(), verts.end(), [&](int u) { return in[static_cast<std::size_t>(u)] != 0; })) {
                total += h.weight(e);
            }
        }
    }
    return total / std::pow(static_cast<double>(members.size()), h.degree());
}

namespace {

double factorial(int m) {
    double f = 1.0;
    for (int k = 2; k <= m; ++k) f *= k;
    return f;
}

constexpr double kFeasibilityTol = 1e-6;

void check_simplex(const WeightedHypergraph& h, std::span<const double> delta) {
    if (delta.size() != h.vertex_count()) throw Error(ErrorKind::InfeasiblePoint, "dimension mismatch");
    double sum = 0.0;
    for (double d : delta) {
        if (d < -kFeasibilityTol) throw Error(ErrorKind::InfeasiblePoint, "negative coordinate");
        sum += d;
    }
    if (std::abs(sum - 1.0) > kFeasibilityTol) throw Error(ErrorKind::InfeasiblePoint, "coordinates do not sum to 1");
}

/// Unscaled objective sum_e W(e) prod delta.
double edge_polynomial(const WeightedHypergraph& h, std::span<const double> delta) {
    double total = 0.0;
    for (std::size_t e = 0; e < h.edge_count(); ++e) {
        double prod = h.weight(e);
        for (int v : h.edge(e)) prod *= delta[static_cast<std::size_t>(v)];
        total += prod;
    }
    return total;
}

}  // namespace

double relaxed_objective(const WeightedHypergraph& h, std::span<const double> delta) {
    check_simplex(h, delta);
    return factorial(h.degree()) * edge_polynomial(h, delta);
}

double relaxed_objective(const WeightedHypergraph& h, std::span<const double> delta, const SimplexBox& box) {
    check_simplex(h, delta);
    if (box.seed < 0 || static_cast<std::size_t>(box.seed) >= delta.size()) {
        throw Error(ErrorKind::InfeasiblePoint, "seed out of range");
    }
    for (double d : delta) {
        if (d > box.epsilon + kFeasibilityTol) throw Error(ErrorKind::InfeasiblePoint, "coordinate above epsilon");
    }
    if (std::abs(delta[static_cast<std::size_t>(box.seed)] - box.epsilon) > kFeasibilityTol) {
        throw Error(ErrorKind::InfeasiblePoint, "seed coordinate must equal epsilon");
    }
    return factorial(h.degree()) * edge_polynomial(h, delta);
}

namespace {

class PairwiseAscent {
public:
    PairwiseAscent(const WeightedHypergraph& h, int seed, double epsilon, const ClusterSearchOptions& opts)
        : h_(h), seed_(seed), eps_(epsilon), opts_(opts), grad_(h.vertex_count(), 0.0), scale_(factorial(h.degree())) {}

    void run(std::vector<double>& delta) {
        const std::size_t n = delta.size();
        const std::size_t max_steps = static_cast<std::size_t>(opts_.max_sweeps) * std::max<std::size_t>(n, 1);
        for (std::size_t step = 0; step < max_steps; ++step) {
            compute_gradient(delta);
            int p = -1;
            int q = -1;
            for (std::size_t v = 0; v < n; ++v) {
                if (static_cast<int>(v) == seed_) continue;
                if (delta[v] < eps_ - 1e-15 && (p < 0 || grad_[v] > grad_[static_cast<std::size_t>(p)])) p = static_cast<int>(v);
                if (delta[v] > 1e-15 && (q < 0 || grad_[v] < grad_[static_cast<std::size_t>(q)])) q = static_cast<int>(v);
            }
            if (p < 0 || q < 0 || p == q) break;
            const double slope = grad_[static_cast<std::size_t>(p)] - grad_[static_cast<std::size_t>(q)];
            if (slope <= opts_.tolerance) break;
            // Along delta_p += t, delta_q -= t the objective is objective + slope*t + curvature*t^2.
            const double curvature = -shared_term(delta, p, q);
            const double t_max = std::min(eps_ - delta[static_cast<std::size_t>(p)], delta[static_cast<std::size_t>(q)]);
            double t = t_max;
            if (curvature < 0.0) t = std::min(t_max, -slope / (2.0 * curvature));
            if (t <= 0.0) break;
            const double gain = slope * t + curvature * t * t;
            delta[static_cast<std::size_t>(p)] = std::min(eps_, delta[static_cast<std::size_t>(p)] + t);
            delta[static_cast<std::size_t>(q)] = std::max(0.0, delta[static_cast<std::size_t>(q)] - t);
            if (opts_.on_step) opts_.on_step(scale_ * edge_polynomial(h_, delta));
            if (gain < opts_.tolerance * 1e-3) break;
        }
    }

private:
    void compute_gradient(std::span<const double> delta) {
        std::fill(grad_.begin(), grad_.end(), 0.0);
        for (std::size_t e = 0; e < h_.edge_count(); ++e) {
            const auto verts = h_.edge(e);
            const double w = h_.weight(e);
            if (w == 0.0) continue;
            for (std::size_t a = 0; a < verts.size(); ++a) {
                double prod = w;
                for (std::size_t b = 0; b < verts.size(); ++b) {
                    if (a != b) prod *= delta[static_cast<std::size_t>(verts[b])];
                }
                grad_[static_cast<std::size_t>(verts[a])] += prod;
            }
        }
    }

    double shared_term(std::span<const double> delta, int p, int q) const {
        double total = 0.0;
        const auto& small = h_.incident(p).size() <= h_.incident(q).size() ? h_.incident(p) : h_.incident(q);
        for (std::size_t e : small) {
            const auto verts = h_.edge(e);
            if (std::find(verts.begin(), verts.end(), p) == verts.end()) continue;
            if (std::find(verts.begin(), verts.end(), q) == verts.end()) continue;
            double prod = h_.weight(e);
            for (int v : verts) {
                if (v != p && v != q) prod *= delta[static_cast<std::size_t>(v)];
            }
            total += prod;
        }
        return total;
    }

    const WeightedHypergraph& h_;
    int seed_;
    double eps_;
    const ClusterSearchOptions& opts_;
    std::vector<double> grad_;
    double scale_;
};

/// Fills the mass left after the seed: preferred vertices first (uniform, capped at epsilon), rest uniform.
std::vector<double> initial_point(std::size_t n, int seed, double eps, const std::vector<int>& preferred) {
    std::vector<double> delta(n, 0.0);
    delta[static_cast<std::size_t>(seed)] = eps;
    double remaining = 1.0 - eps;
    auto spread = [&](const std::vector<int>& group) {
        std::vector<int> open;
        for (int v : group) {
            if (v != seed && delta[static_cast<std::size_t>(v)] < eps) open.push_back(v);
        }
        while (remaining > 1e-15 && !open.empty()) {
            const double share = remaining / static_cast<double>(open.size());
            std::vector<int> still_open;
            for (int v : open) {
                auto& d = delta[static_cast<std::size_t>(v)];
                const double add = std::min(share, eps - d);
                d += add;
                remaining -= add;
                if (d < eps - 1e-15) still_open.push_back(v);
            }
            if (still_open.size() == open.size()) break;
            open.swap(still_open);
        }
    };
    spread(preferred);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    spread(all);
    return delta;
}

std::vector<int> round_top(std::span<const double> delta, int seed, int kappa) {
    std::vector<int> order;
    order.reserve(delta.size());
    for (std::size_t v = 0; v < delta.size(); ++v) {
        if (static_cast<int>(v) != seed) order.push_back(static_cast<int>(v));
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return delta[static_cast<std::size_t>(a)] > delta[static_cast<std::size_t>(b)];
    });
    std::vector<int> members{seed};
    for (int k = 0; k + 1 < kappa && k < static_cast<int>(order.size()); ++k) members.push_back(order[static_cast<std::size_t>(k)]);
    std::sort(members.begin(), members.end());
    return members;
}

}  // namespace

ClusterSolution cluster_search(const WeightedHypergraph& h, int seed, const ClusterSearchOptions& opts) {
    const std::size_t n = h.vertex_count();
    if (seed < 0 || static_cast<std::size_t>(seed) >= n) throw Error(ErrorKind::InvalidArgument, "seed out of range");
    if (opts.kappa_min < h.degree()) throw Error(ErrorKind::InvalidArgument, "kappa_min must be >= degree");

    ClusterSolution best;
    best.seed = seed;
    best.kappa = 1;
    best.members = {seed};
    best.delta.assign(n, 0.0);
    best.delta[static_cast<std::size_t>(seed)] = 1.0;

    const auto incident = h.incident(seed);
    const bool has_weight = std::any_of(incident.begin(), incident.end(), [&](std::size_t e) { return h.weight(e) > 0.0; });
    if (!has_weight) return best;

    std::vector<int> neighbors;
    {
        std::set<int> nb;
        for (std::size_t e : incident) {
            for (int v : h.edge(e)) {
                if (v != seed) nb.insert(v);
            }
        }
        neighbors.assign(nb.begin(), nb.end());
    }
    std::vector<std::size_t> heavy(incident.begin(), incident.end());
    std::stable_sort(heavy.begin(), heavy.end(), [&](std::size_t a, std::size_t b) { return h.weight(a) > h.weight(b); });
    if (heavy.size() > static_cast<std::size_t>(std::max(0, opts.edge_starts))) heavy.resize(static_cast<std::size_t>(std::max(0, opts.edge_starts)));

    std::mt19937_64 rng(opts.rng_seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(seed + 1)));
    const int kappa_max = std::min<int>(opts.kappa_max, static_cast<int>(n));

    for (int kappa = opts.kappa_min; kappa <= kappa_max; ++kappa) {
        const double eps = 1.0 / kappa;
        std::vector<std::vector<double>> starts;
        starts.push_back(initial_point(n, seed, eps, neighbors));
        for (std::size_t e : heavy) {
            // Edge vertices first, then the rest of the neighborhood.
            std::vector<int> pref(h.edge(e).begin(), h.edge(e).end());
            pref.insert(pref.end(), neighbors.begin(), neighbors.end());
            std::vector<double> d = initial_point(n, seed, eps, pref);
            starts.push_back(std::move(d));
        }
        for (int r = 0; r < opts.random_starts; ++r) {
            std::vector<int> shuffled = neighbors;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            shuffled.resize(std::min<std::size_t>(shuffled.size(), static_cast<std::size_t>(kappa - 1)));
            starts.push_back(initial_point(n, seed, eps, shuffled));
        }
        for (auto& delta : starts) {
            PairwiseAscent ascent(h, seed, eps, opts);
            ascent.run(delta);
            std::vector<int> members = round_top(delta, seed, kappa);
            const double score = normalized_weight(h, members);
            if (score > best.score + 1e-15) {
                best.kappa = kappa;
                best.members = std::move(members);
                best.score = score;
                best.delta = delta;
            }
        }
    }
    if (best.score <= 0.0) {
        best.members = {seed};
        best.score = 0.0;
    }
    return best;
}

std::pair<std::vector<int>, double> brute_force_best(const WeightedHypergraph& h, int seed, int kappa_min,
                                                      int kappa_max) {
    const std::size_t n = h.vertex_count();
    if (n > 20) throw Error(ErrorKind::OracleTooLarge, "brute force limited to 20 vertices");
    if (seed < 0 || static_cast<std::size_t>(seed) >= n) throw Error(ErrorKind::InvalidArgument, "seed out of range");
    std::vector<int> best_members{seed};
    double best_score = 0.0;
    const std::uint32_t limit = 1u << n;
    std::vector<int> members;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (!(mask & (1u << seed))) continue;
        const int size = std::popcount(mask);
        if (size < kappa_min || size > kappa_max) continue;
        members.clear();
        for (std::size_t v = 0; v < n; ++v) {
            if (mask & (1u << v)) members.push_back(static_cast<int>(v));
        }
        const double s = normalized_weight(h, members);
        if (s > best_score) {
            best_score = s;
            best_members = members;
        }
    }
    return {best_members, best_score};
}

std::vector<ClusterSolution> select_consistent_clusters(std::vector<ClusterSolution> solutions,
                                                        const ConflictFn& conflicts, std::size_t min_size) {
    std::stable_sort(solutions.begin(), solutions.end(), [](const ClusterSolution& a, const ClusterSolution& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.seed < b.seed;
    });
    std::vector<int> committed;
    std::set<int> committed_set;
    std::vector<ClusterSolution> accepted;
    for (auto& sol : solutions) {
        if (sol.score <= 0.0) continue;
        std::vector<int> order = sol.members;
        auto mass = [&](int v) {
            return static_cast<std::size_t>(v) < sol.delta.size() ? sol.delta[static_cast<std::size_t>(v)] : 0.0;
        };
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (a == sol.seed) return b != sol.seed;
            if (b == sol.seed) return false;
            return mass(a) > mass(b);
        });
        std::vector<int> kept;
        for (int v : order) {
            if (committed_set.count(v)) continue;
            const bool clash_committed = std::any_of(committed.begin(), committed.end(), [&](int u) { return conflicts(u, v); });
            const bool clash_kept = std::any_of(kept.begin(), kept.end(), [&](int u) { return conflicts(u, v); });
            if (!clash_committed && !clash_kept) kept.push_back(v);
        }
        if (kept.empty() || kept.size() < min_size) continue;
        std::sort(kept.begin(), kept.end());
        for (int v : kept) {
            committed.push_back(v);
            committed_set.insert(v);
        }
        sol.members = std::move(kept);
        accepted.push_back(std::move(sol));
    }
    return accepted;
}

}  // namespace hyperact
