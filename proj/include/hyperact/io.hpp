// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/core.hpp"
#include "hyperact/records.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperact {

/// `frame,x,y,w,h,confidence[,f1..fF]` rows; a `# F=<n>` comment declares the appearance width.
/// Throws InputError naming the line on malformed rows or frames out of order.
std::vector<Detection> read_detections(std::istream& in);
void write_detections(std::ostream& out, const std::vector<Detection>& detections);

/// `frame,id,x,y,w,h,confidence,-1,-1,-1` rows.
std::vector<TrackRow> read_tracks(std::istream& in);
void write_track_rows(std::ostream& out, const std::vector<TrackRow>& rows);

/// One JSON object per line and frame.
std::string activities_to_json(const FrameActivities& frame);
FrameActivities activities_from_json(const std::string& line);
std::vector<FrameActivities> read_activities(std::istream& in);
void write_activities(std::ostream& out, const std::vector<FrameActivities>& frames);

/// Shortest text that parses back to the same double.
std::string format_number(double v);

std::vector<Detection> load_detections(const std::string& path);
std::vector<TrackRow> load_tracks(const std::string& path);
std::vector<FrameActivities> load_activities(const std::string& path);

}  // namespace hyperact
