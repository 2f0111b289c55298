// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "hyperact/pipeline.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hyperact {

/// Sets one dotted key. Throws InputError on an unknown key or a malformed value.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Current value of one dotted key in the text form accepted by set_config_value.
std::string get_config_value(const PipelineConfig& config, std::string_view key);

/// Every key understood by set_config_value, in documentation order. Rule keys are expanded for
/// all interaction classes.
std::vector<std::string> config_keys();

/// Parses `key = value` lines on top of config; `#` starts a comment. Errors carry the line number.
/// The result is validated.
void apply_config_text(PipelineConfig& config, std::string_view text);

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

/// Every key with its current value; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const PipelineConfig& config);

}  // namespace hyperact
