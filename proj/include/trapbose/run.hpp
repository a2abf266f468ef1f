#pragma once

#include <optional>
#include <string>

#include "trapbose/config.hpp"

namespace trapbose {

inline constexpr const char* kVersion = "1.0.0";

// Validates, executes, writes artifacts. Returns the process exit code:
// 0 success, 2 config error (nothing written), 3 solver error (diagnostics
// file written when the output directory is usable).
int run_command(Command cmd, const std::filesystem::path& config_path,
                const std::optional<std::string>& out_override, int jobs);

} // namespace trapbose
