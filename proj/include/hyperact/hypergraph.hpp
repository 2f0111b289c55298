// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperact {

/// m-uniform hypergraph with nonnegative edge weights. Edges are stored unordered.
class WeightedHypergraph {
public:
    WeightedHypergraph(std::size_t vertex_count, int degree);

    std::size_t vertex_count() const { return vertex_count_; }
    int degree() const { return degree_; }
    std::size_t edge_count() const { return weights_.size(); }

    /// Vertices are sorted on insertion; negative weights are clamped to 0.
    /// Returns the edge index.
    std::size_t add_edge(std::span<const int> vertices, double weight);

    std::span<const int> edge(std::size_t e) const {
        return {vertices_.data() + e * static_cast<std::size_t>(degree_), static_cast<std::size_t>(degree_)};
    }
    double weight(std::size_t e) const { return weights_[e]; }
    /// Edge indices incident to v.
    std::span<const std::size_t> incident(int v) const { return incidence_[static_cast<std::size_t>(v)]; }

    /// One line per edge: "edge v1 ... vm weight".
    std::string dump() const;
    static WeightedHypergraph parse(std::string_view text, std::size_t vertex_count, int degree);

private:
    std::size_t vertex_count_;
    int degree_;
    std::vector<int> vertices_;
    std::vector<double> weights_;
    std::vector<std::vector<std::size_t>> incidence_;
};

/// Sum of weights of edges enclosed by members, divided by |members|^m.
double normalized_weight(const WeightedHypergraph& h, std::span<const int> members);

/// Box constraint of the relaxed cluster problem: delta_seed = epsilon, 0 <= delta <= epsilon.
struct SimplexBox {
    int seed = 0;
    double epsilon = 1.0;
};

/// m! * sum_e W(e) prod_{v in e} delta_v. Throws InfeasiblePoint off the simplex (tolerance 1e-6).
double relaxed_objective(const WeightedHypergraph& h, std::span<const double> delta);
double relaxed_objective(const WeightedHypergraph& h, std::span<const double> delta, const SimplexBox& box);

struct ClusterSearchOptions {
    int kappa_min = 3;
    int kappa_max = 8;
    double tolerance = 1e-9;
    int max_sweeps = 500;
    /// Starts seeded from the heaviest incident edges, in addition to the neighbor-uniform start.
    int edge_starts = 4;
    /// Extra perturbed starts drawn from rng_seed.
    int random_starts = 1;
    std::uint64_t rng_seed = 0;
    /// Called with the relaxed objective after every pairwise update.
    std::function<void(double)> on_step;
};

struct ClusterSolution {
    int seed = 0;
    int kappa = 0;
    std::vector<double> delta;
    std::vector<int> members;
    double score = 0.0;
    /// Caller-defined label carried through selection.
    int tag = 0;
};

/// Cohesive cluster around seed: pairwise-update ascent of the relaxed objective for each kappa
/// in range, top-kappa rounding with the seed forced in, best rounded normalized weight kept.
ClusterSolution cluster_search(const WeightedHypergraph& h, int seed, const ClusterSearchOptions& opts);

/// Exhaustive maximum of normalized_weight over seed-containing subsets, |V| <= 20.
std::pair<std::vector<int>, double> brute_force_best(const WeightedHypergraph& h, int seed, int kappa_min,
                                                      int kappa_max);

using ConflictFn = std::function<bool(int, int)>;

/// Greedy sweep in descending score. Duplicated vertices are stripped, vertices conflicting with
/// committed or higher-mass members are dropped, clusters left with fewer than min_size members
/// (or none new) are discarded.
std::vector<ClusterSolution> select_consistent_clusters(std::vector<ClusterSolution> solutions,
                                                        const ConflictFn& conflicts, std::size_t min_size);

}  // namespace hyperact
