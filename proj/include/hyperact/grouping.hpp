// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"

#include <span>
#include <vector>

namespace hyperact {

struct GroupingParams {
    /// Distance kernel mode and spread, px.
    double mu_d = 60.0;
    double sigma_d = 60.0;
    /// Front/back attenuation of the angle kernel; 0 disables it.
    double angle_c = 0.2;
    /// Velocity-difference spread, px/frame.
    double sigma_v = 1.5;
    /// Activity factor for differing individual labels.
    double activity_mismatch = 0.5;
    /// Edges below this weight are dropped from the sparse graph.
    double sparsify_threshold = 0.3;
};

double distance_kernel(double d, const GroupingParams& p);
double angle_kernel(double phi_ij, double phi_ji, const GroupingParams& p);
double velocity_kernel(Vec2 vi, Vec2 vj, const GroupingParams& p);

/// Activity-correlation kernel of two targets observed in the same frame, in [0,1].
double p_corr(const KinematicSample& xi, const KinematicSample& xj, IndividualActivity ai, IndividualActivity aj,
              const GroupingParams& params);

/// Symmetric weighted graph over targets, indexed by position in the input list.
class GroupGraph {
public:
    GroupGraph() = default;
    explicit GroupGraph(std::vector<int> keys);

    std::size_t size() const { return keys_.size(); }
    int key(std::size_t i) const { return keys_[i]; }
    const std::vector<int>& keys() const { return keys_; }
    bool sparsified() const { return sparsified_; }

    double weight(std::size_t i, std::size_t j) const { return w_[i * keys_.size() + j]; }
    void set_weight(std::size_t i, std::size_t j, double w);
    bool adjacent(std::size_t i, std::size_t j) const { return i != j && weight(i, j) > 0.0; }
    std::size_t edge_count() const;
    std::vector<std::size_t> neighbors(std::size_t i) const;

    /// Zeroes every edge below threshold.
    void sparsify(double threshold);

private:
    std::vector<int> keys_;
    std::vector<double> w_;
    bool sparsified_ = false;
};

/// Complete graph with window-averaged p_corr weights over the frames shared by each pair in
/// [first, last], sparsified when requested.
GroupGraph build_group_graph(std::span<const TargetSeries> targets, int first, int last,
                             const GroupingParams& params, bool sparsify = true);

}  // namespace hyperact
