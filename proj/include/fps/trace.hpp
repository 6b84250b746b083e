#pragma once

#include <sstream>
#include <string>

namespace fps {

// Diagnostic trace levels 0..4 (0 silent). Lines go to a settable sink so the
// CLI can route them to stderr and tests can capture them.
namespace trace {

int level();
void set_level(int level);
using Sink = void (*)(const std::string&);
void set_sink(Sink sink);  // nullptr restores the stderr default
void emit(int level, const std::string& line);

}  // namespace trace

// trace_line(2, "FPS: looking for DE of degree ", k) — streams all arguments.
template <typename... Args>
void trace_line(int lvl, Args&&... args) {
    if (trace::level() < lvl) return;
    std::ostringstream os;
    (os << ... << args);
    trace::emit(lvl, os.str());
}

}  // namespace fps
