#pragma once

// Random but valid sessions built by driving the state machine with the
// mock backend.

#include <random>
#include <string>
#include <vector>

#include "altcanvas/engine.hpp"

namespace fuzz {

inline std::vector<altcanvas::Command> random_commands(std::mt19937_64& rng, int count) {
    static const std::vector<std::string> names = {
        "enter", "escape", "shift", "shift-g", "shift-i", "shift-r", "shift-c", "shift-l", "shift-s", "shift-k",
        "shift-x", "arrow-up", "arrow-down", "arrow-left", "arrow-right", "shift-arrow-up", "shift-arrow-down",
        "shift-arrow-left", "shift-arrow-right", "transcript", "transcript", "enter", "enter"};
    static const std::vector<std::string> prompts = {
        "Create an image of a dog", "a red apple", "Create an image of a clock",
        "what is \"this\"?\nline two", "caf\xC3\xA9 table", "a\ttab"};
    std::vector<altcanvas::Command> out;
    for (int i = 0; i < count; ++i) {
        const std::string& n = names[rng() % names.size()];
        out.push_back(n == "transcript" ? altcanvas::parse_command(n, prompts[rng() % prompts.size()])
                                        : altcanvas::parse_command(n));
    }
    return out;
}

inline altcanvas::CanvasConfig random_config(std::mt19937_64& rng) {
    altcanvas::CanvasConfig c;
    c.width = 100 + static_cast<int>(rng() % 900);
    c.height = 100 + static_cast<int>(rng() % 900);
    c.speech_rate = 1 + static_cast<int>(rng() % 3);
    c.image_style = rng() % 2 ? altcanvas::ImageStyle::Tactile : altcanvas::ImageStyle::Color;
    return c;
}

// Leaves the session mid-mode about half the time so every mode is covered.
inline altcanvas::SessionState random_session(std::uint64_t seed, int commands = 80) {
    std::mt19937_64 rng(seed);
    const auto config = random_config(rng);
    auto backend = altcanvas::make_backend("mock", seed);
    altcanvas::MemoryImageStore store;
    auto state = altcanvas::new_session(config, seed);
    for (const auto& cmd : random_commands(rng, commands)) {
        const auto r = altcanvas::handle(state, cmd);
        if (r.dispatch && rng() % 4 != 0)
            altcanvas::handle(state, altcanvas::execute(state, *r.dispatch, *backend, store));
    }
    return state;
}

} // namespace fuzz
