#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "smoothrank/smooth_rank.hpp"

namespace smoothrank {

// JSON document holding everything needed to reproduce scores exactly:
// threshold, per-feature scaling, grids, masked ratios, smoothed curves and
// weights. Doubles are written with round-trip precision.
std::string model_to_json(const SmoothRankModel& model, int indent = 1);
SmoothRankModel model_from_json(std::string_view text);

void save_model(const SmoothRankModel& model, const std::filesystem::path& path);
SmoothRankModel load_model(const std::filesystem::path& path);

}  // namespace smoothrank
