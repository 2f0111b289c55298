// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/records.hpp"

#include <climits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperact {

struct MotMetrics {
    long gt = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long id_switches = 0;
    long fragmentations = 0;
    int frames = 0;
    int trajectories = 0;
    int mostly_tracked = 0;
    int mostly_lost = 0;
    double iou_sum = 0.0;

    double recall() const { return gt > 0 ? static_cast<double>(tp) / gt : 0.0; }
    double precision() const { return tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0; }
    double far() const { return frames > 0 ? static_cast<double>(fp) / frames : 0.0; }
    double mota() const { return gt > 0 ? 1.0 - static_cast<double>(fn + fp + id_switches) / gt : 0.0; }
    double motp() const { return tp > 0 ? iou_sum / tp : 0.0; }
    double mt_ratio() const { return trajectories > 0 ? static_cast<double>(mostly_tracked) / trajectories : 0.0; }
    double ml_ratio() const { return trajectories > 0 ? static_cast<double>(mostly_lost) / trajectories : 0.0; }
};

struct MotResult {
    MotMetrics metrics;
    /// Per frame: ground-truth id -> hypothesis id.
    std::map<int, std::map<int, int>> matches;
};

/// CLEAR MOT with match persistence over frames >= first_frame. Throws NoGroundTruth when no
/// ground-truth box falls in range.
MotResult clear_mot(std::span<const TrackRow> truth, std::span<const TrackRow> hypothesis, double iou_threshold = 0.5,
                    int first_frame = INT_MIN);

struct AccuracyReport {
    double oca = 0.0;
    double mca = 0.0;
    long samples = 0;
    /// confusion[truth][predicted].
    std::vector<std::vector<long>> confusion;
};

/// Labels are class indices in [0, classes). Throws NoSamples on empty input.
AccuracyReport activity_accuracy(std::span<const int> truth, std::span<const int> predicted, int classes);

/// Aligned label streams per level: individual per target-frame, interaction per pair-frame,
/// collective per target-frame, scene per frame. Class "none" has index kCollectiveCount.
struct AlignedLabels {
    std::vector<int> individual_truth, individual_pred;
    std::vector<int> interaction_truth, interaction_pred;
    std::vector<int> collective_truth, collective_pred;
    std::vector<int> scene_truth, scene_pred;
};

AlignedLabels align_labels(const MotResult& mot, std::span<const FrameActivities> truth,
                           std::span<const FrameActivities> predicted, int first_frame = INT_MIN);

struct MetricsReport {
    MotMetrics mot;
    std::optional<AccuracyReport> individual;
    std::optional<AccuracyReport> interaction;
    std::optional<AccuracyReport> collective;
    std::optional<AccuracyReport> scene;

    std::string to_text() const;
    std::string to_json() const;
};

/// Full evaluation; activity levels without aligned samples are left empty.
MetricsReport evaluate(std::span<const TrackRow> truth_tracks, std::span<const TrackRow> hyp_tracks,
                       std::span<const FrameActivities> truth_labels, std::span<const FrameActivities> hyp_labels,
                       double iou_threshold = 0.5, int first_frame = INT_MIN);

}  // namespace hyperact
