// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/image.hpp>

#include <algorithm>
#include <cmath>

namespace splatpose {

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw InvalidInput("image dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

Vec3
Image::pixel(int x, int y) const {
    return {at(x, y, 0), at(x, y, 1), at(x, y, 2)};
}

void
Image::set_pixel(int x, int y, const Vec3 &rgb) {
    for (int c = 0; c < kChannels; ++c) {
        at(x, y, c) = rgb[c];
    }
}

unsigned char
to_8bit(double v) {
    const double clamped = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(255.0 * clamped));
}

} // namespace splatpose
