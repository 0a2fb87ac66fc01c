#include "slidelab/patch.hpp"

#include <algorithm>
#include <cmath>

#include "slidelab/rng.hpp"
#include "slidelab/util.hpp"

namespace slidelab {

void WhitespaceRule::validate() const {
    for (double v : {luminance_floor, saturation_ceiling, background_fraction}) {
        if (v < 0.0 || v > 1.0) throw Error("whitespace rule thresholds must lie in [0,1]");
    }
}

void PatchConfig::validate() const {
    if (patch_size < 1) throw Error("patch_size must be >= 1");
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0) {
        throw Error("overlap_fraction must lie in [0,1)");
    }
    whitespace.validate();
}

int PatchConfig::stride() const {
    long long s = std::llround(patch_size * (1.0 - overlap_fraction));
    return static_cast<int>(std::max<long long>(1, s));
}

std::string PatchRef::file_stem() const {
    return slide_id + "_" + std::to_string(origin_x) + "_" + std::to_string(origin_y);
}

std::vector<std::pair<int, int>> enumerate_origins(int width, int height,
                                                   const PatchConfig& config) {
    config.validate();
    std::vector<std::pair<int, int>> origins;
    const int stride = config.stride();
    const int p = config.patch_size;
    for (int y = 0; y + p <= height; y += stride) {
        for (int x = 0; x + p <= width; x += stride) {
            origins.emplace_back(x, y);
        }
    }
    return origins;
}

bool is_background(const Image& patch, const WhitespaceRule& rule) {
    rule.validate();
    if (patch.empty()) return true;
    std::size_t n = static_cast<std::size_t>(patch.width) * patch.height;
    std::size_t background = 0;
    for (std::size_t i = 0; i < n; ++i) {
        float r = patch.px[i * 3];
        float g = patch.px[i * 3 + 1];
        float b = patch.px[i * 3 + 2];
        if (pixel_luminance(r, g, b) >= rule.luminance_floor &&
            pixel_saturation(r, g, b) <= rule.saturation_ceiling) {
            ++background;
        }
    }
    return static_cast<double>(background) / static_cast<double>(n) >= rule.background_fraction;
}

Image crop_patch(const Image& slide, int x, int y, int patch_size) {
    Image out(patch_size, patch_size);
    for (int py = 0; py < patch_size; ++py) {
        const float* src = &slide.px[(static_cast<std::size_t>(y + py) * slide.width + x) * 3];
        float* dst = &out.px[static_cast<std::size_t>(py) * patch_size * 3];
        std::copy(src, src + static_cast<std::size_t>(patch_size) * 3, dst);
    }
    return out;
}

std::vector<std::pair<PatchRef, Image>> extract_patches(const SlideRecord& slide,
                                                        const Image& pixels,
                                                        const PatchConfig& config) {
    std::vector<std::pair<PatchRef, Image>> out;
    for (auto [x, y] : enumerate_origins(pixels.width, pixels.height, config)) {
        Image patch = crop_patch(pixels, x, y, config.patch_size);
        if (is_background(patch, config.whitespace)) continue;
        PatchRef ref;
        ref.slide_id = slide.slide_id;
        ref.origin_x = x;
        ref.origin_y = y;
        ref.patch_size = config.patch_size;
        ref.label = slide.label;
        out.emplace_back(std::move(ref), std::move(patch));
    }
    return out;
}

std::vector<std::pair<PatchRef, Image>> extract_patches(const SlideRecord& slide,
                                                        const PatchConfig& config) {
    Image pixels = read_image(slide.path);
    return extract_patches(slide, pixels, config);
}

std::map<std::string, std::vector<PatchRef>> balance_classes(
    const std::map<std::string, std::vector<PatchRef>>& patch_lists,
    std::optional<std::size_t> target, std::uint64_t seed) {
    if (target && *target == 0) throw Error("balance target must be >= 1");
    if (patch_lists.empty()) return {};

    std::size_t limit;
    if (target) {
        limit = *target;
    } else {
        limit = SIZE_MAX;
        for (const auto& [cls, list] : patch_lists) limit = std::min(limit, list.size());
    }

    std::map<std::string, std::vector<PatchRef>> out;
    for (const auto& [cls, list] : patch_lists) {
        if (list.size() <= limit) {
            out[cls] = list;
            continue;
        }
        // Per-class sub-seed so the draw does not depend on sibling classes.
        Rng rng(mix_seed(seed, fnv1a64(cls)));
        std::vector<std::size_t> keep = rng.sample_indices(list.size(), limit);
        std::vector<PatchRef> sampled;
        sampled.reserve(keep.size());
        for (std::size_t i : keep) sampled.push_back(list[i]);
        out[cls] = std::move(sampled);
    }
    return out;
}

}  // namespace slidelab
