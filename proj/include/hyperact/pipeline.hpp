// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/grouping.hpp"
#include "hyperact/interaction.hpp"
#include "hyperact/records.hpp"
#include "hyperact/tracking.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hyperact {

struct PipelineConfig {
    int fps = 25;
    /// Window length and stride, frames.
    int window = 20;
    double tau_a_seconds = 5.0;
    std::uint64_t seed = 0;

    BuilderParams builder;
    LinkParams link;
    GroupingParams grouping;
    HypothesisParams hypotheses;
    RuleTable rules = RuleTable::defaults();
    RecognitionOptions recognition;

    /// Recovery of occluded targets through hypothetical tracklets.
    bool recovery = true;
    /// A target counts as occluded when its last state is this many frames before the window end.
    int occlusion_margin = 5;
    /// Longest run of recovered frames since the last observation.
    int max_recovered = 50;
    /// Gate between an occluded target's extrapolated position and a new tracklet's first foot point.
    double splice_gate_px = 20.0;
    double splice_gate_growth_px = 1.0;
    /// New tracklets shorter than this are discarded unless they touch the window end.
    int new_target_min_length = 3;
    int scene_hold_frames = 50;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
    /// Link parameters with tau_a converted to frames and the cluster-search seed applied.
    LinkParams effective_link() const;
};

/// Everything emitted for one frame.
struct FrameOutput {
    std::vector<TrackRow> tracks;
    FrameActivities activities;
};

/// Online window loop. Frames are emitted once the window holding them has been processed, so the
/// output for frame f only depends on detections up to the end of f's window.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);
    ~Pipeline();
    Pipeline(Pipeline&&) noexcept;
    Pipeline& operator=(Pipeline&&) noexcept;

    /// Detections must arrive in non-decreasing frame order; throws InputError otherwise.
    void push(const Detection& detection);
    /// Declares that no detection with frame < frame will follow, processing complete windows.
    void advance_to(int frame);
    /// Processes the remaining partial window.
    void finish();
    /// Moves out every frame emitted so far, in frame order.
    std::vector<FrameOutput> drain();

    const PipelineConfig& config() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

/// Runs a whole detection list through a fresh pipeline.
std::vector<FrameOutput> run_pipeline(std::span<const Detection> detections, const PipelineConfig& config);

}  // namespace hyperact
