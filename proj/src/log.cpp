#include "fedeval/log.hpp"

#include <atomic>
#include <cstdio>

namespace fedeval::log {

namespace {
std::atomic<Level> g_level{Level::Info};

void emit(const char* tag, const std::string& msg) {
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}
} // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void debug(const std::string& msg) {
    if (level() <= Level::Debug) emit("debug", msg);
}
void info(const std::string& msg) {
    if (level() <= Level::Info) emit("info", msg);
}
void warn(const std::string& msg) {
    if (level() <= Level::Warn) emit("warn", msg);
}
void error(const std::string& msg) {
    if (level() <= Level::Error) emit("error", msg);
}

} // namespace fedeval::log
