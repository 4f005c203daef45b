#pragma once

#include <spdlog/spdlog.h>

namespace magpos {

/// Diagnostics logger on standard error. Level comes from MAGPOS_LOG
/// (quiet, info, trace); unset or unknown means quiet.
spdlog::logger& log();

}  // namespace magpos
