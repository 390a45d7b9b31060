#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aqil/trainer.hpp"

namespace aqil {

/// Two stacked panels: per-episode loss and score, each with a trailing moving average.
std::string curves_svg(const std::vector<EpisodeLog>& logs, const std::string& title, int window = 20);

void write_curves_svg(const std::filesystem::path& path, const std::vector<EpisodeLog>& logs,
                      const std::string& title);

}  // namespace aqil
