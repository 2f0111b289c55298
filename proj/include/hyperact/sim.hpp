// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/interaction.hpp"
#include "hyperact/records.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperact {

/// Constant-velocity leg of a motion script, px/frame.
struct Segment {
    int frames = 0;
    Vec2 velocity;
};

/// Agent standing still after its last segment.
struct AgentScript {
    int id = 0;
    int group = -1;
    Vec2 start;
    std::vector<Segment> segments;
    int appear = 0;
    /// First frame the agent is gone; -1 keeps it until the end.
    int vanish = -1;
    double box_w = 32.0;
    double box_h = 80.0;

    Vec2 foot_at(int frame) const;
    Vec2 velocity_at(int frame) const;
    bool present(int frame) const { return frame >= appear && (vanish < 0 || frame < vanish); }
};

struct GroupScript {
    int id = 0;
    Collective collective = Collective::Crossing;
    Interaction interaction = Interaction::WS;
};

struct Occlusion {
    int agent = 0;
    int first = 0;
    int last = 0;
};

struct NoiseModel {
    /// Box-center jitter and box-size jitter, px.
    double jitter = 0.0;
    double size_jitter = 0.0;
    double miss_rate = 0.0;
    /// Expected false detections per frame.
    double fp_rate = 0.0;
    double appearance_sigma = 0.0;
};

NoiseModel moderate_noise();

struct Scenario {
    std::uint64_t seed = 0;
    int frames = 100;
    int fps = 25;
    int width = 1280;
    int height = 720;
    /// Frames excluded from scoring.
    int warmup = 40;
    int appearance_dim = 8;
    NoiseModel noise;
    std::vector<GroupScript> groups;
    std::vector<AgentScript> agents;
    std::vector<Occlusion> occlusions;

    /// Throws InvalidArgument on duplicate agent ids, unknown groups, rates or occlusions out of range.
    void validate() const;
    std::string to_json() const;
    static Scenario from_json(std::string_view text);
};

/// Ground-truth individual label for a scripted speed.
IndividualActivity scripted_activity(double speed);

struct SimOutput {
    std::vector<Detection> detections;
    std::vector<TrackRow> truth;
    std::vector<FrameActivities> labels;
    /// Per-identity appearance vectors, indexed like Scenario::agents.
    std::vector<std::vector<double>> identities;
};

SimOutput synthesize(const Scenario& scenario);

/// Named scripted scenes: one per collective class plus "occlusion", "distractor", "mixed", "throughput".
std::vector<std::string> preset_names();
Scenario preset(std::string_view name, std::uint64_t seed, bool noisy);

/// The nine collective-class presets plus "mixed".
std::vector<std::string> default_suite();

}  // namespace hyperact
