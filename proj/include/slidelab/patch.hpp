#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slidelab/corpus.hpp"
#include "slidelab/image.hpp"

namespace slidelab {

// Background test: a pixel counts as background when it is bright and
// unsaturated (glass under H&E stains near-white); a patch is background
// when at least background_fraction of its pixels are.
struct WhitespaceRule {
    double luminance_floor = 0.86;
    double saturation_ceiling = 0.08;
    double background_fraction = 0.90;

    void validate() const;
};

struct PatchConfig {
    int patch_size = 224;
    double overlap_fraction = 0.5;  // in [0,1)
    WhitespaceRule whitespace;

    void validate() const;
    // patch_size * (1 - overlap_fraction), rounded to nearest, floored at 1.
    int stride() const;
};

// One extracted patch with provenance back to its slide.
struct PatchRef {
    std::string slide_id;
    int origin_x = 0;
    int origin_y = 0;
    int patch_size = 0;
    std::string label;

    std::string file_stem() const;  // "{slide_id}_{x}_{y}"
};

// Sliding-window origins {0, stride, 2*stride, ...} per axis, keeping only
// origins where the patch fits, in row-major order.
std::vector<std::pair<int, int>> enumerate_origins(int width, int height,
                                                   const PatchConfig& config);

bool is_background(const Image& patch, const WhitespaceRule& rule);

// Crop a patch_size square at (x, y); caller guarantees bounds.
Image crop_patch(const Image& slide, int x, int y, int patch_size);

// All non-background patches of a slide, in enumeration order.
std::vector<std::pair<PatchRef, Image>> extract_patches(const SlideRecord& slide,
                                                        const PatchConfig& config);
std::vector<std::pair<PatchRef, Image>> extract_patches(const SlideRecord& slide,
                                                        const Image& pixels,
                                                        const PatchConfig& config);

// Seeded per-class downsampling. Each class keeps
// min(target or smallest class count, its own count) patches, sampled
// uniformly without replacement; sampled patches keep their input order.
std::map<std::string, std::vector<PatchRef>> balance_classes(
    const std::map<std::string, std::vector<PatchRef>>& patch_lists,
    std::optional<std::size_t> target, std::uint64_t seed);

}  // namespace slidelab
