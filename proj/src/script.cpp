#include "altcanvas/script.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace altcanvas {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_tabs(const std::string& line, std::size_t max_fields) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (fields.size() + 1 < max_fields) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) break;
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    fields.push_back(line.substr(start));
    return fields;
}

bool skippable(const std::string& line) {
    const auto first = line.find_first_not_of(" \t");
    return first == std::string::npos || line[first] == '#';
}

template <class T>
std::optional<T> parse_number(const std::string& s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

Error line_error(int line, const std::string& what) {
    return Error(ErrorCode::MalformedCommand, "line " + std::to_string(line) + ": " + what);
}

} // namespace

Script parse_script(std::string_view text) {
    Script script;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const std::string& line = lines[i];
        if (skippable(line)) continue;
        if (line[0] == '@') {
            const auto f = split_tabs(line.substr(1), 2);
            if (f.size() != 2) throw line_error(n, "header needs '@key<TAB>value'");
            const std::string& key = f[0];
            const std::string& value = f[1];
            auto int_value = [&] {
                const auto v = parse_number<int>(value);
                if (!v) throw line_error(n, "'" + key + "' needs an integer");
                return *v;
            };
            if (!script.commands.empty()) throw line_error(n, "headers must precede commands");
            if (key == "width") script.config.width = int_value();
            else if (key == "height") script.config.height = int_value();
            else if (key == "speech_rate") script.config.speech_rate = int_value();
            else if (key == "style") {
                const auto s = parse_image_style(value);
                if (!s) throw line_error(n, "style must be tactile or color");
                script.config.image_style = *s;
            } else if (key == "seed") {
                const auto v = parse_number<std::uint64_t>(value);
                if (!v) throw line_error(n, "seed needs a non-negative integer");
                script.seed = *v;
            } else if (key == "backend") {
                if (value != "mock" && value != "remote") throw line_error(n, "backend must be mock or remote");
                script.backend = value;
            } else {
                throw line_error(n, "unknown header '" + key + "'");
            }
            continue;
        }
        const auto f = split_tabs(line, 3);
        if (f.size() < 2) throw line_error(n, "expected 'seq<TAB>command[<TAB>payload]'");
        const auto seq = parse_number<std::uint64_t>(f[0]);
        if (!seq) throw line_error(n, "sequence number must be a non-negative integer");
        if (*seq != script.commands.size())
            throw line_error(n, "sequence number " + f[0] + " out of order (expected " +
                                    std::to_string(script.commands.size()) + ")");
        try {
            script.commands.push_back(parse_command(f[1], f.size() == 3 ? std::optional(f[2]) : std::nullopt));
        } catch (const Error& e) {
            throw line_error(n, e.what());
        }
    }
    try {
        script.config.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedCommand, std::string("script header: ") + e.what());
    }
    return script;
}

Script load_script(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MalformedCommand, "cannot open script " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_script(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

namespace {

// A check naming an absent object fails rather than being malformed.
struct MissingObject {
    std::string name;
};

const SceneObject& named(const Scene& scene, const std::string& name, int line) {
    const SceneObject* found = nullptr;
    for (const auto& o : scene.objects()) {
        if (o.name != name) continue;
        if (found) throw line_error(line, "more than one object is named '" + name + "'");
        found = &o;
    }
    if (!found) throw MissingObject{name};
    return *found;
}

std::string box_text(const SceneObject& o) {
    const Box b = bounding_box(o);
    return o.name + " [" + std::to_string(b.top_left.x) + "," + std::to_string(b.top_left.y) + ")-(" +
           std::to_string(b.bottom_right.x) + "," + std::to_string(b.bottom_right.y) + ")";
}

} // namespace

std::vector<CheckResult> evaluate_checks(std::string_view text, const Scene& scene) {
    static const char* rows[] = {"top", "middle", "bottom"};
    static const char* cols[] = {"left", "center", "right"};
    std::vector<CheckResult> results;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (skippable(lines[i])) continue;
        const auto f = split_tabs(lines[i], 8);
        const std::string& kind = f[0];
        CheckResult r{n, lines[i], false, ""};
        auto arity = [&](std::size_t k) {
            if (f.size() != k + 1) throw line_error(n, "'" + kind + "' takes " + std::to_string(k) + " argument(s)");
        };
        auto integer = [&](const std::string& s) {
            const auto v = parse_number<int>(s);
            if (!v) throw line_error(n, "expected an integer, got '" + s + "'");
            return *v;
        };

        try {
            if (kind == "count") {
                arity(1);
                r.passed = static_cast<int>(scene.size()) == integer(f[1]);
                r.detail = std::to_string(scene.size()) + " objects";
            } else if (kind == "max_dimension_at_least") {
                arity(2);
                const auto& o = named(scene, f[1], n);
                const int m = std::max(o.size.width, o.size.height);
                r.passed = m >= integer(f[2]);
                r.detail = o.name + " is " + std::to_string(o.size.width) + "x" + std::to_string(o.size.height);
            } else if (kind == "left_of" || kind == "above") {
                arity(2);
                const auto& a = named(scene, f[1], n);
                const auto& b = named(scene, f[2], n);
                const Box ba = bounding_box(a), bb = bounding_box(b);
                r.passed = kind == "left_of" ? ba.bottom_right.x <= bb.top_left.x
                                             : ba.bottom_right.y <= bb.top_left.y;
                r.detail = box_text(a) + " vs " + box_text(b);
            } else if (kind == "overlaps") {
                arity(2);
                const auto& a = named(scene, f[1], n);
                const auto& b = named(scene, f[2], n);
                r.passed = overlaps(a, b);
                r.detail = box_text(a) + " vs " + box_text(b);
            } else if (kind == "no_overlaps") {
                arity(0);
                r.passed = true;
                const auto& objs = scene.objects();
                for (std::size_t x = 0; x < objs.size(); ++x)
                    for (std::size_t y = x + 1; y < objs.size(); ++y)
                        if (overlaps(objs[x], objs[y])) {
                            r.passed = false;
                            r.detail += (r.detail.empty() ? "" : "; ") + objs[x].name + " overlaps " + objs[y].name;
                        }
            } else if (kind == "row" || kind == "col") {
                arity(2);
                const auto& o = named(scene, f[1], n);
                const bool is_row = kind == "row";
                const char* const* names = is_row ? rows : cols;
                const int idx = is_row ? third_index(o.center.y, scene.config().height)
                                       : third_index(o.center.x, scene.config().width);
                if (f[2] != names[0] && f[2] != names[1] && f[2] != names[2])
                    throw line_error(n, "unknown third '" + f[2] + "'");
                r.passed = f[2] == names[idx];
                r.detail = o.name + " center (" + std::to_string(o.center.x) + "," + std::to_string(o.center.y) +
                           ") is in the " + names[idx] + " third";
            } else {
                throw line_error(n, "unknown check '" + kind + "'");
            }
        } catch (const MissingObject& m) {
            r.passed = false;
            r.detail = "no object named '" + m.name + "'";
        }
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace altcanvas
