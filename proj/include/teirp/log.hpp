#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace teirp {

/// Shared stderr logger. Verbosity comes from TEIRP_LOG
/// (off|error|warn|info|debug|trace or 0..5, default warn).
std::shared_ptr<spdlog::logger> logger();

}  // namespace teirp
