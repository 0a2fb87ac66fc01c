#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slidelab/image.hpp"

namespace slidelab {

enum class Split { Unassigned, Train, Validation, Test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

// One whole-slide image with its label and split assignment.
struct SlideRecord {
    std::string slide_id;
    std::filesystem::path path;
    int width = 0;
    int height = 0;
    std::string label;
    Split split = Split::Unassigned;
};

struct CorpusManifest {
    std::vector<SlideRecord> records;
    std::vector<std::string> class_set;
    std::string source_note;

    int class_index(const std::string& label) const;  // -1 when absent
    std::vector<SlideRecord> records_in(Split s) const;
};

struct SplitRatios {
    double train_fraction = 0.41;
    double validation_fraction = 0.20;
    double test_fraction = 0.39;

    void validate() const;  // fractions in [0,1], sum 1 within 1e-9
};

// Explicit per-split counts; must sum to the record count when supplied.
struct SplitCounts {
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};

// Load and validate a manifest file. Format: optional leading
// "#classes: a,b,c" line, then tab-separated rows of
// slide_id <TAB> relative_path <TAB> label [<TAB> split].
// Every referenced image is opened and decoded; dimensions are recorded.
// validate_images=false skips the decode pass (dimensions stay 0).
CorpusManifest load_manifest(const std::filesystem::path& path, bool validate_images = true);

// Write a manifest (4-column form, including split assignments).
void save_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);

// Shuffle records with the seeded generator and assign splits. Counts are
// round(N * fraction) for train and validation with the remainder going to
// test, unless explicit counts are supplied. Assignment is a pure function
// of (record order, ratios/counts, seed). Throws if any record already has
// a split and allow_reassign is false.
CorpusManifest split_corpus(const CorpusManifest& manifest, const SplitRatios& ratios,
                            std::uint64_t seed, bool allow_reassign = false,
                            const std::optional<SplitCounts>& override_counts = std::nullopt);

// Square-resize the full slide for the diffusion pipeline.
Image normalize_for_diffusion(const SlideRecord& record, int target_edge);

// Split counts implied by the rounding rule.
std::array<std::size_t, 3> planned_split_counts(std::size_t n, const SplitRatios& ratios);

}  // namespace slidelab
