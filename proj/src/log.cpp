#include "magpos/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace magpos {

spdlog::logger& log() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>("magpos", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    const char* env = std::getenv("MAGPOS_LOG");
    const std::string level = env ? env : "quiet";
    if (level == "trace") l->set_level(spdlog::level::trace);
    else if (level == "info") l->set_level(spdlog::level::info);
    else l->set_level(spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return *logger;
}

}  // namespace magpos
