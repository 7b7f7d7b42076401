#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dtcv/network.hpp"

namespace dtcv {

/// Line-oriented network format; see docs/network-format.md.
NetworkSpec read_network_text(std::string_view text);
std::string write_network_text(const NetworkSpec& spec);

NetworkSpec load_network_file(const std::filesystem::path& path);
void save_network_file(const NetworkSpec& spec, const std::filesystem::path& path);

}  // namespace dtcv
