#include "altcanvas/prompts.hpp"

#include <algorithm>
#include <cctype>

namespace altcanvas::prompts {

std::string fill(std::string_view tmpl, const Bindings& bindings) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl.compare(i, 2, "${") == 0) {
            const auto close = tmpl.find('}', i + 2);
            if (close != std::string_view::npos) {
                const auto key = tmpl.substr(i + 2, close - i - 2);
                auto it = std::find_if(bindings.begin(), bindings.end(),
                                       [&](const auto& b) { return b.first == key; });
                if (it != bindings.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::string squash_whitespace(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += ch;
    }
    return out;
}

} // namespace altcanvas::prompts
