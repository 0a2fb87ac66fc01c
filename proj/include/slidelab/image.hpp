#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slidelab {

// 8-bit-sourced RGB image held as float channels in [0,1], row-major,
// interleaved RGB. Alpha is dropped and grayscale replicated on decode, so
// every image in the system has exactly 3 channels.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> px;  // size = width * height * 3

    Image() = default;
    Image(int w, int h, float fill = 0.0f)
        : width(w), height(h), px(static_cast<std::size_t>(w) * h * 3, fill) {}

    float& at(int x, int y, int c) { return px[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    float at(int x, int y, int c) const { return px[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

    void set_pixel(int x, int y, float r, float g, float b) {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        px[i] = r;
        px[i + 1] = g;
        px[i + 2] = b;
    }

    bool empty() const { return width == 0 || height == 0; }
};

// Decode a PNG or JPEG file. Throws slidelab::Error on missing or
// undecodable input.
Image read_image(const std::filesystem::path& path);

// Read just the dimensions without a full decode.
void read_image_size(const std::filesystem::path& path, int& width, int& height);

// Write as 8-bit RGB PNG with fixed encoder settings so identical pixels
// give identical bytes.
void write_png(const std::filesystem::path& path, const Image& img);

// Bilinear resize with half-pixel center alignment. An identity resize is a
// pixel-exact copy; a 2x downsample averages each 2x2 block exactly.
Image resize_bilinear(const Image& src, int out_width, int out_height);

// Pixel luminance/saturation as used by the background rule:
// luminance = max(R,G,B); saturation = (max-min)/max, 0 when max == 0.
inline float pixel_luminance(float r, float g, float b) {
    return std::max(r, std::max(g, b));
}
inline float pixel_saturation(float r, float g, float b) {
    float mx = std::max(r, std::max(g, b));
    if (mx <= 0.0f) return 0.0f;
    float mn = std::min(r, std::min(g, b));
    return (mx - mn) / mx;
}

}  // namespace slidelab
