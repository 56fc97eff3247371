// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/image.hpp>

#include <png.h>

#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <memory>
#include <string>
#include <vector>

namespace splatpose {

namespace {

struct FileCloser {
    void
    operator()(std::FILE *f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr
open_file(const std::filesystem::path &path, const char *mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    return f;
}

} // namespace

Image
read_png(const std::filesystem::path &path) {
    FilePtr file = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path.string(), 0, "libpng initialization failed");
    }
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path.string(), 0, "invalid PNG data");
    }
    png_init_io(png, file.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    const int bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) {
        png_set_swap(png);
    }
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * height);
    rows.resize(height);
    for (int y = 0; y < height; ++y) {
        rows[y] = buffer.data() + rowbytes * y;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                if (bit_depth == 16) {
                    const auto *p = reinterpret_cast<const std::uint16_t *>(rows[y]);
                    img.at(x, y, c) = p[x * 3 + c] / 65535.0;
                } else {
                    img.at(x, y, c) = rows[y][x * 3 + c] / 255.0;
                }
            }
        }
    }
    return img;
}

void
write_png(const std::filesystem::path &path, const Image &image) {
    FilePtr file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw ParseError(path.string(), 0, "libpng initialization failed");
    }
    std::vector<unsigned char> buffer(image.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        buffer[i] = to_8bit(image.data()[i]);
    }
    std::vector<png_bytep> rows(image.height());
    for (int y = 0; y < image.height(); ++y) {
        rows[y] = buffer.data() + static_cast<std::size_t>(y) * image.width() * 3;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ParseError(path.string(), 0, "PNG encoding failed");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

namespace {

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void
jpeg_error_exit(j_common_ptr cinfo) {
    auto *err = reinterpret_cast<JpegErrorManager *>(cinfo->err);
    std::longjmp(err->jump, 1);
}

} // namespace

Image
read_jpeg(const std::filesystem::path &path) {
    FilePtr file = open_file(path, "rb");
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    std::vector<unsigned char> buffer;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw ParseError(path.string(), 0, "invalid JPEG data");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const int width = static_cast<int>(cinfo.output_width);
    const int height = static_cast<int>(cinfo.output_height);
    buffer.resize(static_cast<std::size_t>(width) * height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = buffer.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    Image img(width, height);
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        img.data()[i] = buffer[i] / 255.0;
    }
    return img;
}

Image
read_image(const std::filesystem::path &path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") {
        return read_png(path);
    }
    if (ext == ".jpg" || ext == ".jpeg") {
        return read_jpeg(path);
    }
    throw ParseError(path.string(), 0, "unsupported image extension '" + ext + "'");
}

} // namespace splatpose
