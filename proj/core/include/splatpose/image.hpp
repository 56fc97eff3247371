// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <splatpose/geometry.hpp>

#include <cstddef>
#include <filesystem>
#include <vector>

namespace splatpose {

/// Row-major H x W x 3 image of doubles. Unit dynamic range by convention.
class Image {
  public:
    static constexpr int kChannels = 3;

    Image() = default;
    Image(int width, int height, double fill = 0.0);

    int
    width() const {
        return width_;
    }
    int
    height() const {
        return height_;
    }
    std::size_t
    pixel_count() const {
        return static_cast<std::size_t>(width_) * height_;
    }
    std::size_t
    size() const {
        return data_.size();
    }
    bool
    empty() const {
        return data_.empty();
    }
    bool
    same_shape(const Image &other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    double &
    at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }
    double
    at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }
    Vec3 pixel(int x, int y) const;
    void set_pixel(int x, int y, const Vec3 &rgb);

    std::vector<double> &
    data() {
        return data_;
    }
    const std::vector<double> &
    data() const {
        return data_;
    }

    bool
    operator==(const Image &other) const {
        return same_shape(other) && data_ == other.data_;
    }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// 8-bit (or 16-bit) PNG, gray/RGB/RGBA; alpha is dropped.
Image read_png(const std::filesystem::path &path);
/// 8-bit RGB PNG, round(255 * clamp(v, 0, 1)).
void write_png(const std::filesystem::path &path, const Image &image);
Image read_jpeg(const std::filesystem::path &path);
/// Dispatches on the extension (.png, .jpg, .jpeg).
Image read_image(const std::filesystem::path &path);

/// The exact 8-bit code written by write_png for a linear value.
unsigned char to_8bit(double v);

} // namespace splatpose
