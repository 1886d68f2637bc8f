#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "altcanvas/engine.hpp"

namespace altcanvas {

/// A command script. Text form, one record per line:
///   # comment
///   @width<TAB>600            header (width, height, style, speech_rate, seed, backend)
///   0<TAB>enter               command, sequence numbers dense from 0
///   1<TAB>transcript<TAB>Create an image of a dog
struct Script {
    CanvasConfig config;
    std::uint64_t seed = 0;
    std::string backend = "mock";
    std::vector<Command> commands;
};

/// Throws MalformedCommand with a "line N:" prefix.
Script parse_script(std::string_view text);
Script load_script(const std::string& path);

/// Post-conditions on a final scene. Text form, tab separated, one per line:
///   count<TAB>N
///   max_dimension_at_least<TAB>name<TAB>N
///   left_of<TAB>a<TAB>b        a's box ends at or before b's box starts (x)
///   above<TAB>a<TAB>b          same along y
///   overlaps<TAB>a<TAB>b
///   no_overlaps
///   row<TAB>name<TAB>top|middle|bottom      center third
///   col<TAB>name<TAB>left|center|right
struct CheckResult {
    int line = 0;
    std::string check;      // the line as written
    bool passed = false;
    std::string detail;     // observed values
};

/// Throws MalformedCommand for unknown or ill-formed check lines.
std::vector<CheckResult> evaluate_checks(std::string_view text, const Scene& scene);

} // namespace altcanvas
