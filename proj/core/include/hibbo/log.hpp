#pragma once

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace hibbo::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

inline Level& level_ref() {
    static Level lvl = [] {
        const char* env = std::getenv("HIBBO_LOG_LEVEL");
        if (!env) return Level::Error;
        const std::string s(env);
        if (s == "debug") return Level::Debug;
        if (s == "info") return Level::Info;
        return Level::Error;
    }();
    return lvl;
}

inline void set_level(Level lvl) { level_ref() = lvl; }

inline void emit(Level lvl, const char* tag, const std::string& msg) {
    if (lvl > level_ref()) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void error(const std::string& msg) { emit(Level::Error, "error", msg); }
inline void info(const std::string& msg) { emit(Level::Info, "info", msg); }
inline void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }

}  // namespace hibbo::log
