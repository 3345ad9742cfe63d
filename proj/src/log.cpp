#include "teirp/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace teirp {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("TEIRP_LOG");
  if (raw == nullptr || *raw == '\0') return spdlog::level::warn;
  const std::string v(raw);
  if (v.size() == 1 && v[0] >= '0' && v[0] <= '5') {
    static constexpr spdlog::level::level_enum by_digit[] = {
        spdlog::level::off,  spdlog::level::err,   spdlog::level::warn,
        spdlog::level::info, spdlog::level::debug, spdlog::level::trace};
    return by_digit[v[0] - '0'];
  }
  return spdlog::level::from_str(v);
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = std::make_shared<spdlog::logger>("teirp",
                                              std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_level(level_from_env());
    l->set_pattern("[%l] %v");
    return l;
  }();
  return instance;
}

}  // namespace teirp
