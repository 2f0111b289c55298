// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "hyperact/grouping.hpp"

#include <algorithm>
#include <cmath>

namespace hyperact {

double distance_kernel(double d, const GroupingParams& p) {
    const double z = (d - p.mu_d) / p.sigma_d;
    return std::exp(-0.5 * z * z);
}

double angle_kernel(double phi_ij, double phi_ji, const GroupingParams& p) {
    return (1.0 - p.angle_c * std::abs(std::cos(phi_ij))) * (1.0 - p.angle_c * std::abs(std::cos(phi_ji)));
}

double velocity_kernel(Vec2 vi, Vec2 vj, const GroupingParams& p) {
    const Vec2 dv = vi - vj;
    return std::exp(-dv.dot(dv) / (2.0 * p.sigma_v * p.sigma_v));
}

double p_corr(const KinematicSample& xi, const KinematicSample& xj, IndividualActivity ai, IndividualActivity aj,
              const GroupingParams& params) {
    const PairGeometry gij = pair_geometry(xi.foot, xi.facing, xj.foot);
    const PairGeometry gji = pair_geometry(xj.foot, xj.facing, xi.foot);
    const double k_act = ai == aj ? 1.0 : params.activity_mismatch;
    const double value = distance_kernel(gij.distance, params) * angle_kernel(gij.angle, gji.angle, params) *
                         velocity_kernel(xi.velocity, xj.velocity, params) * k_act;
    return std::clamp(value, 0.0, 1.0);
}

GroupGraph::GroupGraph(std::vector<int> keys) : keys_(std::move(keys)), w_(keys_.size() * keys_.size(), 0.0) {}

void GroupGraph::set_weight(std::size_t i, std::size_t j, double w) {
    if (i == j) return;
    w_[i * keys_.size() + j] = w;
    w_[j * keys_.size() + i] = w;
}

std::size_t GroupGraph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) count += adjacent(i, j) ? 1 : 0;
    }
    return count;
}

std::vector<std::size_t> GroupGraph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (adjacent(i, j)) out.push_back(j);
    }
    return out;
}

void GroupGraph::sparsify(double threshold) {
    for (auto& w : w_) {
        if (w < threshold) w = 0.0;
    }
    sparsified_ = true;
}

GroupGraph build_group_graph(std::span<const TargetSeries> targets, int first, int last,
                             const GroupingParams& params, bool sparsify) {
    std::vector<int> keys;
    keys.reserve(targets.size());
    for (const auto& t : targets) keys.push_back(t.key);
    GroupGraph graph(std::move(keys));
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            double sum = 0.0;
            int count = 0;
            for (int f = first; f <= last; ++f) {
                const KinematicSample* si = targets[i].sample_at(f);
                const KinematicSample* sj = targets[j].sample_at(f);
                if (si == nullptr || sj == nullptr) continue;
                sum += p_corr(*si, *sj, targets[i].label, targets[j].label, params);
                ++count;
            }
            if (count > 0) graph.set_weight(i, j, sum / count);
        }
    }
    if (sparsify) graph.sparsify(params.sparsify_threshold);
    return graph;
}

}  // namespace hyperact
