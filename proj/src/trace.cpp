#include "fps/trace.hpp"

#include <iostream>

namespace fps::trace {

namespace {
int g_level = 0;
Sink g_sink = nullptr;
}  // namespace

int level() { return g_level; }
void set_level(int level) { g_level = level; }
void set_sink(Sink sink) { g_sink = sink; }

void emit(int lvl, const std::string& line) {
    if (g_level < lvl) return;
    if (g_sink)
        g_sink(line);
    else
        std::cerr << line << "\n";
}

}  // namespace fps::trace
