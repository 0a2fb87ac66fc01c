#include "slidelab/image.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include <jpeglib.h>

#include "slidelab/util.hpp"

namespace slidelab {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw Error("cannot open file: " + path.string());
    return f;
}

enum class ImageKind { Png, Jpeg, Unknown };

ImageKind sniff_kind(std::FILE* f) {
    unsigned char magic[8] = {0};
    std::size_t n = std::fread(magic, 1, sizeof(magic), f);
    std::rewind(f);
    if (n >= 8 && png_sig_cmp(magic, 0, 8) == 0) return ImageKind::Png;
    if (n >= 2 && magic[0] == 0xFF && magic[1] == 0xD8) return ImageKind::Jpeg;
    return ImageKind::Unknown;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

Image read_png_file(std::FILE* f, const std::string& name, bool header_only, int& w, int& h) {
    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw Error("png init failed: " + name);
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw Error("png init failed: " + name);
    if (setjmp(png_jmpbuf(r.png))) throw Error("undecodable PNG: " + name);

    png_init_io(r.png, f);
    png_read_info(r.png, r.info);
    w = static_cast<int>(png_get_image_width(r.png, r.info));
    h = static_cast<int>(png_get_image_height(r.png, r.info));
    if (header_only) return {};

    // Normalize every color type to 8-bit RGB.
    png_set_expand(r.png);
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);
    if (png_get_channels(r.png, r.info) != 3) throw Error("undecodable PNG: " + name);

    Image img(w, h);
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (int x = 0; x < w * 3; ++x) {
            img.px[static_cast<std::size_t>(y) * w * 3 + x] = row[x] / 255.0f;
        }
    }
    png_read_end(r.png, nullptr);
    return img;
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(mgr->jump, 1);
}

Image read_jpeg_file(std::FILE* f, const std::string& name, bool header_only, int& w, int& h) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.base);
    jerr.base.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error("undecodable JPEG: " + name);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    w = static_cast<int>(cinfo.image_width);
    h = static_cast<int>(cinfo.image_height);
    if (header_only) {
        jpeg_destroy_decompress(&cinfo);
        return {};
    }
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    Image img(w, h);
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
    unsigned char* rowp = row.data();
    int y = 0;
    while (cinfo.output_scanline < cinfo.output_height) {
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (int x = 0; x < w * 3; ++x) {
            img.px[static_cast<std::size_t>(y) * w * 3 + x] = row[x] / 255.0f;
        }
        ++y;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

Image read_any(const std::filesystem::path& path, bool header_only, int& w, int& h) {
    if (!std::filesystem::exists(path)) throw Error("image file missing: " + path.string());
    FilePtr f = open_file(path, "rb");
    switch (sniff_kind(f.get())) {
        case ImageKind::Png:
            return read_png_file(f.get(), path.string(), header_only, w, h);
        case ImageKind::Jpeg:
            return read_jpeg_file(f.get(), path.string(), header_only, w, h);
        default:
            throw Error("unrecognized image format: " + path.string());
    }
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
    int w = 0, h = 0;
    return read_any(path, false, w, h);
}

void read_image_size(const std::filesystem::path& path, int& width, int& height) {
    read_any(path, true, width, height);
}

void write_png(const std::filesystem::path& path, const Image& img) {
    if (img.empty()) throw Error("refusing to write empty image: " + path.string());
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    FilePtr f = open_file(path, "wb");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png init failed: " + path.string());
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png init failed: " + path.string());
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("png write failed: " + path.string());
    }
    png_init_io(png, f.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width * 3; ++x) {
            float v = img.px[static_cast<std::size_t>(y) * img.width * 3 + x];
            v = std::min(1.0f, std::max(0.0f, v));
            row[x] = static_cast<unsigned char>(std::lround(v * 255.0f));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image resize_bilinear(const Image& src, int out_width, int out_height) {
    if (src.empty()) throw Error("resize of empty image");
    if (out_width < 1 || out_height < 1) throw Error("resize target must be at least 1x1");
    if (out_width == src.width && out_height == src.height) return src;

    Image dst(out_width, out_height);
    const double sx = static_cast<double>(src.width) / out_width;
    const double sy = static_cast<double>(src.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        int y1 = y0 + 1;
        y0 = std::clamp(y0, 0, src.height - 1);
        y1 = std::clamp(y1, 0, src.height - 1);
        for (int x = 0; x < out_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            int x1 = x0 + 1;
            x0 = std::clamp(x0, 0, src.width - 1);
            x1 = std::clamp(x1, 0, src.width - 1);
            for (int c = 0; c < 3; ++c) {
                double top = (1.0 - wx) * src.at(x0, y0, c) + wx * src.at(x1, y0, c);
                double bot = (1.0 - wx) * src.at(x0, y1, c) + wx * src.at(x1, y1, c);
                dst.at(x, y, c) = static_cast<float>((1.0 - wy) * top + wy * bot);
            }
        }
    }
    return dst;
}

}  // namespace slidelab
