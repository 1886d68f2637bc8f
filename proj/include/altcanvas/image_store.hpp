#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "altcanvas/raster.hpp"

namespace altcanvas {

/// Content-addressed PNG storage. Keys are the SHA-256 of the PNG bytes.
class ImageStore {
public:
    virtual ~ImageStore() = default;

    std::string put_raster(const RasterImage& img);
    std::optional<RasterImage> get_raster(const std::string& key) const;

    virtual std::string put(const Bytes& png) = 0;
    virtual std::optional<Bytes> get(const std::string& key) const = 0;
};

class MemoryImageStore final : public ImageStore {
public:
    std::string put(const Bytes& png) override;
    std::optional<Bytes> get(const std::string& key) const override;

private:
    mutable std::mutex mu_;
    std::map<std::string, Bytes> blobs_;
};

/// One file per image: <dir>/<sha256>.png.
class DirectoryImageStore final : public ImageStore {
public:
    explicit DirectoryImageStore(std::filesystem::path dir);

    std::string put(const Bytes& png) override;
    std::optional<Bytes> get(const std::string& key) const override;
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
};

} // namespace altcanvas
