// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/interaction.hpp"

#include <optional>
#include <vector>

namespace hyperact {

/// One row of a tracks file.
struct TrackRow {
    int frame = 0;
    int id = 0;
    Box box;
    double confidence = 1.0;
    bool operator==(const TrackRow&) const = default;
};

struct TargetActivity {
    int id = 0;
    IndividualActivity individual = IndividualActivity::Standing;
    std::optional<Collective> collective;
    bool operator==(const TargetActivity&) const = default;
};

struct InteractionRecord {
    int i = 0;
    int j = 0;
    Interaction label = Interaction::NA;
    double p = 0.0;
    bool operator==(const InteractionRecord&) const = default;
};

/// Activities of one frame. Interactions list pairs with i < j.
struct FrameActivities {
    int frame = 0;
    std::optional<Collective> scene;
    std::vector<TargetActivity> targets;
    std::vector<InteractionRecord> interactions;
    bool operator==(const FrameActivities&) const = default;
};

}  // namespace hyperact
