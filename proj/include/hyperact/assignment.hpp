// Copyright (C) 2026 hyperact contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <limits>
#include <vector>

namespace hyperact {

/// Rectangular min-cost assignment. cost[r][c] >= kForbidden marks a forbidden pair.
/// Returns, for each row, the assigned column or -1.
inline constexpr double kForbidden = 1e12;

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace hyperact
