// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/records.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hyperact {

struct RenderOptions {
    int width = 1280;
    int height = 720;
};

/// One frame: boxes colored by id, individual label tags, chords between interacting targets and a
/// banner with the scene label. activities may be null.
std::string render_frame_svg(int frame, std::span<const TrackRow> rows, const FrameActivities* activities,
                             const RenderOptions& options = {});

/// Frames [first, last] that carry tracks or activities, as (frame, svg) pairs.
std::vector<std::pair<int, std::string>> render_svgs(std::span<const TrackRow> tracks,
                                                     std::span<const FrameActivities> activities, int first, int last,
                                                     const RenderOptions& options = {});

}  // namespace hyperact
