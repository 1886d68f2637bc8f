#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>

#include "altcanvas/genai.hpp"

namespace altcanvas {

namespace {

Bytes digest(std::string_view text) {
    const std::string hex = sha256_hex(text);
    Bytes out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
    return out;
}

GenResult failure(std::string message) {
    GenResult r;
    r.error = GenFailure{ErrorCode::BackendUnavailable, std::move(message)};
    return r;
}

GenResult text_result(std::string text) {
    GenResult r;
    r.description = std::move(text);
    return r;
}

std::optional<RasterImage> try_decode(const Bytes& png) {
    try {
        return decode_png(png);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

GenResult image_result(const RasterImage& img) {
    GenResult r;
    r.image = encode_png(img);
    return r;
}

void fill_ellipse(RasterImage& img, int cx, int cy, int rx, int ry, Rgba color) {
    for (int y = cy - ry; y <= cy + ry; ++y)
        for (int x = cx - rx; x <= cx + rx; ++x) {
            if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
            const std::int64_t dx = x - cx, dy = y - cy;
            if (dx * dx * ry * ry + dy * dy * rx * rx <= std::int64_t{rx} * rx * ry * ry) img.set(x, y, color);
        }
}

std::string with_article(const std::string& noun) {
    if (noun.empty()) return noun;
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(noun[0])));
    const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
    return (vowel ? "an " : "a ") + noun;
}

// HSV with s = 0.6, v = 1 to 8-bit RGB.
Rgba hue_color(int hue) {
    const double h = hue / 60.0;
    const double c = 0.6, x = c * (1 - std::abs(std::fmod(h, 2.0) - 1)), m = 1.0 - c;
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h) % 6) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x; break;
    }
    auto to8 = [&](double v) { return static_cast<std::uint8_t>(std::lround((v + m) * 255.0)); };
    return {to8(r), to8(g), to8(b), 255};
}

} // namespace

GenResult MockBackend::generate_image(const GenRequest& request) {
    if (request.subject.empty()) return failure("mock generate_image needs a subject");
    const Bytes h = digest(request.subject + "\n" + std::to_string(seed_));
    const int n = kImageSize;
    RasterImage img(n, n);
    const Rgba ink = request.style == ImageStyle::Tactile
                         ? Rgba{20, 20, 20, 255}
                         : Rgba{static_cast<std::uint8_t>(h[20] % 200), static_cast<std::uint8_t>(h[21] % 200),
                                static_cast<std::uint8_t>(h[22] % 200), 255};
    fill_ellipse(img, n / 2, n / 2, 24 + h[0] % 20, 24 + h[1] % 20, ink);
    for (int k = 0; k < 3; ++k) {
        const auto b = static_cast<std::size_t>(2 + 4 * k);
        fill_ellipse(img, 34 + h[b] % 60, 34 + h[b + 1] % 60, 8 + h[b + 2] % 16, 8 + h[b + 3] % 16, ink);
    }
    return image_result(img);
}

GenResult MockBackend::remove_background(const GenRequest& request) {
    if (!request.image) return failure("mock remove_background needs an image");
    auto decoded = try_decode(*request.image);
    if (!decoded) return failure("mock remove_background could not decode the image");
    RasterImage& img = *decoded;
    // Flood the corner colour inwards from the border and make it transparent.
    const Rgba bg = img.at(0, 0);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(img.width) * img.height, 0);
    std::deque<std::pair<int, int>> queue;
    auto visit = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
        auto& s = seen[static_cast<std::size_t>(y) * img.width + x];
        if (s || img.at(x, y) != bg) return;
        s = 1;
        queue.emplace_back(x, y);
    };
    for (int x = 0; x < img.width; ++x) visit(x, 0), visit(x, img.height - 1);
    for (int y = 0; y < img.height; ++y) visit(0, y), visit(img.width - 1, y);
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        img.set(x, y, {bg.r, bg.g, bg.b, 0});
        visit(x + 1, y), visit(x - 1, y), visit(x, y + 1), visit(x, y - 1);
    }
    return image_result(img);
}

GenResult MockBackend::describe_image(const GenRequest& request) {
    const std::string kind = request.style == ImageStyle::Tactile ? "line drawing" : "color illustration";
    return text_result("A simple " + kind + " of " + with_article(request.subject) + ".");
}

GenResult MockBackend::describe_canvas(const GenRequest& request) {
    return text_result(request.context);
}

GenResult MockBackend::answer_question(const GenRequest& request) {
    return text_result("About " + request.subject + ": " + request.question.value_or("") + " Context: " +
                       request.context);
}

GenResult MockBackend::render_background(const GenRequest& request) {
    if (!request.image) return failure("mock render_background needs an image");
    auto decoded = try_decode(*request.image);
    if (!decoded) return failure("mock render_background could not decode the image");
    RasterImage& img = *decoded;
    const Bytes h = digest(request.prompt);
    const Rgba tint = hue_color((h[0] << 8 | h[1]) % 360);
    for (std::size_t i = 0; i < img.pixels.size(); i += 4) {
        img.pixels[i] = static_cast<std::uint8_t>((img.pixels[i] * 7 + tint.r * 3 + 5) / 10);
        img.pixels[i + 1] = static_cast<std::uint8_t>((img.pixels[i + 1] * 7 + tint.g * 3 + 5) / 10);
        img.pixels[i + 2] = static_cast<std::uint8_t>((img.pixels[i + 2] * 7 + tint.b * 3 + 5) / 10);
    }
    return image_result(img);
}

} // namespace altcanvas
