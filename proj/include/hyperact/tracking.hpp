// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/grouping.hpp"
#include "hyperact/hypergraph.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hyperact {

// ---------------------------------------------------------------------------------------------
// Individual activity

struct SpeedParams {
    double theta_sw = 1.2;
    double w1 = 0.15;
    double theta_wr = 4.5;
    double w2 = 0.3;
    /// False folds running mass into walking (two-class alphabet).
    bool use_running = true;
    /// Velocity span of the per-frame speeds.
    int speed_span = 9;
    /// Frames whose median speed decides the label.
    int classify_span = 15;
};

ActivityPosterior speed_posterior(double speed, const SpeedParams& params);

struct IndividualEstimate {
    IndividualActivity label = IndividualActivity::Standing;
    ActivityPosterior posterior{1.0, 0.0, 0.0};
    double speed = 0.0;
};

IndividualEstimate classify_speed(double speed, const SpeedParams& params);

/// Median per-frame speed over the tracklet states in [first, last]. A single state reads as standing.
IndividualEstimate classify_individual(const Tracklet& tracklet, int first, int last, const SpeedParams& params);

/// Label at one frame from the classify_span frames centered on it.
IndividualEstimate classify_at(const Tracklet& tracklet, int frame, const SpeedParams& params);

// ---------------------------------------------------------------------------------------------
// Candidate tracklets

struct BuilderParams {
    /// Foot-point gate for frame-to-frame linking, px, plus growth per skipped frame.
    double gate_px = 25.0;
    double gate_growth_px = 5.0;
    /// Longest run of missing frames bridged by interpolation.
    int max_bridge = 3;
    double appearance_weight = 0.5;
    int velocity_span = 5;
};

/// Nearest-neighbor tracklet builder over frame-sorted detections. Throws InputError when frames
/// are out of order.
std::vector<Tracklet> build_tracklets(std::span<const Detection> detections, const BuilderParams& params);

/// exp(-||a - b||); 1 when either vector is empty.
double appearance_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Mean appearance of the last count states.
std::vector<double> recent_appearance(const Tracklet& tracklet, std::size_t count);

struct LinkParams {
    double theta_a = 0.025;
    /// Targets unobserved this many frames before the window are dropped (5 s at 25 FPS).
    int tau_a_frames = 125;
    /// Missing frames a stage-1 link may bridge.
    int max_link_gap = 5;
    double link_gate_px = 30.0;
    double link_gate_growth_px = 2.0;
    int velocity_span = 5;
    std::size_t appearance_history = 50;
    double lambda_a = 30.0;
    double lambda_d = 1.0;
    double lambda_g = 0.5;
    int degree = 3;
    std::size_t edge_cap = 200;
    /// Linking hypergraph on; off leaves every link to the bipartite fallback.
    bool use_hypergraph = true;
    ClusterSearchOptions search;
    FacingParams facing;
    SpeedParams speed;
};

struct CandidateMap {
    /// Admissible candidate indices per target.
    std::vector<std::vector<int>> per_target;
    /// Candidates admitted by no target.
    std::vector<int> unclaimed;
    /// Targets unobserved for tau_a before the window.
    std::vector<int> dropped;
};

/// Motion and appearance gate for appending cand after the end of from; returns the link cost.
std::optional<double> link_cost(const Tracklet& from, const Tracklet& cand, const LinkParams& params);

CandidateMap generate_candidates(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                                 int window_first, const LinkParams& params);

// ---------------------------------------------------------------------------------------------
// Tracking hypergraph and linking

struct LinkHypothesis {
    int target = 0;
    int candidate = 0;
    /// Cached per-hypothesis terms.
    double appearance = 1.0;
    double facing_cos = 1.0;
    Vec2 target_foot;
    Vec2 candidate_foot;
};

LinkHypothesis make_hypothesis(const Tracklet& target, const Tracklet& candidate, int target_index,
                               int candidate_index, const LinkParams& params);

struct EdgeTerms {
    double appearance = 0.0;
    double facing = 0.0;
    double geometry = 0.0;
    double weight = 0.0;
};

/// Combined hyperedge weight over unordered hypothesis pairs, clamped to >= 0.
EdgeTerms edge_weight_T(std::span<const LinkHypothesis> edge, const LinkParams& params);

struct TrackingHypergraph {
    std::vector<LinkHypothesis> vertices;
    WeightedHypergraph graph{0, 2};
};

/// Vertices are admissible (target, candidate) pairs; edges join hypotheses of pairwise adjacent
/// targets with distinct candidates.
TrackingHypergraph build_tracking_hypergraph(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                                             const CandidateMap& candidates, const GroupGraph& groups,
                                             const LinkParams& params);

struct LinkResult {
    /// Candidate chain committed to each target, in temporal order.
    std::vector<std::vector<int>> chains;
    /// Targets left without a link.
    std::vector<int> unlinked;
    /// Candidates claimed by no target.
    std::vector<int> unclaimed;
    /// Number of links decided by the hypergraph search.
    std::size_t hypergraph_links = 0;
};

LinkResult link_tracklets(std::span<const Tracklet> targets, std::span<const Tracklet> tracklets,
                          const CandidateMap& candidates, const GroupGraph& groups, const LinkParams& params);

}  // namespace hyperact
