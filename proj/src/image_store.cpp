#include "altcanvas/image_store.hpp"

#include <fstream>
#include <iterator>

namespace altcanvas {

std::string ImageStore::put_raster(const RasterImage& img) {
    return put(encode_png(img));
}

std::optional<RasterImage> ImageStore::get_raster(const std::string& key) const {
    auto bytes = get(key);
    if (!bytes) return std::nullopt;
    try {
        return decode_png(*bytes);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string MemoryImageStore::put(const Bytes& png) {
    auto key = sha256_hex(png);
    std::lock_guard lock(mu_);
    blobs_.try_emplace(key, png);
    return key;
}

std::optional<Bytes> MemoryImageStore::get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = blobs_.find(key);
    if (it == blobs_.end()) return std::nullopt;
    return it->second;
}

DirectoryImageStore::DirectoryImageStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string DirectoryImageStore::put(const Bytes& png) {
    auto key = sha256_hex(png);
    const auto path = dir_ / (key + ".png");
    if (!std::filesystem::exists(path)) {
        // write-then-rename so concurrent writers never expose a partial file
        const auto tmp = dir_ / (key + ".png.tmp");
        {
            std::ofstream out(tmp, std::ios::binary);
            out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
        }
        std::filesystem::rename(tmp, path);
    }
    return key;
}

std::optional<Bytes> DirectoryImageStore::get(const std::string& key) const {
    if (key.find_first_not_of("0123456789abcdef") != std::string::npos) return std::nullopt;
    std::ifstream in(dir_ / (key + ".png"), std::ios::binary);
    if (!in) return std::nullopt;
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace altcanvas
