#pragma once

#include <spdlog/spdlog.h>

namespace modalrepair {

/// Library logger writing to stderr. The level comes from MODALREPAIR_LOG
/// (trace, debug, info, warn, error, off); the default is warn.
spdlog::logger& logger();

}  // namespace modalrepair
