#include "ssfgm/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace ssfgm {

void configure_logging_from_env() {
  auto logger = spdlog::get("ssfgm");
  if (!logger) logger = spdlog::stderr_color_mt("ssfgm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("SSFGM_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

}  // namespace ssfgm
