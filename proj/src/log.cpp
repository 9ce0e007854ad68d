#include "modalrepair/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>
#include <memory>

namespace modalrepair {

spdlog::logger& logger() {
    static const std::shared_ptr<spdlog::logger> instance = [] {
        auto l = std::make_shared<spdlog::logger>("modalrepair", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("MODALREPAIR_LOG")) l->set_level(spdlog::level::from_str(env));
        return l;
    }();
    return *instance;
}

}  // namespace modalrepair
