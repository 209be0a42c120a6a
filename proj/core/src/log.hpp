#pragma once

#include <spdlog/spdlog.h>

namespace vmwe::detail {

/// Library logger; writes to standard error.
spdlog::logger& log();

}  // namespace vmwe::detail
