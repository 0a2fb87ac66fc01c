#include "slidelab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "slidelab/rng.hpp"
#include "slidelab/util.hpp"

namespace slidelab {

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
        case Split::Unassigned: return "unassigned";
    }
    return "unassigned";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "validation") return Split::Validation;
    if (name == "test") return Split::Test;
    if (name == "unassigned" || name.empty()) return Split::Unassigned;
    throw Error("unknown split name: " + name);
}

int CorpusManifest::class_index(const std::string& label) const {
    for (std::size_t i = 0; i < class_set.size(); ++i) {
        if (class_set[i] == label) return static_cast<int>(i);
    }
    return -1;
}

std::vector<SlideRecord> CorpusManifest::records_in(Split s) const {
    std::vector<SlideRecord> out;
    for (const auto& r : records) {
        if (r.split == s) out.push_back(r);
    }
    return out;
}

void SplitRatios::validate() const {
    for (double f : {train_fraction, validation_fraction, test_fraction}) {
        if (f < 0.0 || f > 1.0) throw Error("split fraction out of [0,1]");
    }
    double sum = train_fraction + validation_fraction + test_fraction;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error("split fractions must sum to 1.0, got " + format_fixed(sum, 12));
    }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, '\t')) out.push_back(field);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CorpusManifest load_manifest(const std::filesystem::path& path, bool validate_images) {
    std::ifstream in(path);
    if (!in) throw Error("manifest file missing: " + path.string());

    CorpusManifest manifest;
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    std::string line;
    int line_no = 0;
    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.rfind("#classes:", 0) == 0) {
            std::string rest = stripped.substr(9);
            std::istringstream cs(rest);
            std::string cls;
            while (std::getline(cs, cls, ',')) {
                cls = trim(cls);
                if (cls.empty()) continue;
                if (std::find(manifest.class_set.begin(), manifest.class_set.end(), cls) !=
                    manifest.class_set.end()) {
                    throw Error("manifest line " + std::to_string(line_no) +
                                ": duplicate class name '" + cls + "'");
                }
                manifest.class_set.push_back(cls);
            }
            continue;
        }
        if (stripped.rfind("#note:", 0) == 0) {
            manifest.source_note = trim(stripped.substr(6));
            continue;
        }
        if (stripped[0] == '#') continue;

        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() < 3 || fields.size() > 4) {
            throw Error("manifest line " + std::to_string(line_no) +
                        ": expected 3 or 4 tab-separated fields, got " +
                        std::to_string(fields.size()));
        }
        SlideRecord rec;
        rec.slide_id = trim(fields[0]);
        rec.path = base / trim(fields[1]);
        rec.label = trim(fields[2]);
        if (fields.size() == 4) rec.split = split_from_name(trim(fields[3]));
        if (rec.slide_id.empty()) {
            throw Error("manifest line " + std::to_string(line_no) + ": empty slide_id");
        }
        if (!seen_ids.insert(rec.slide_id).second) {
            throw Error("manifest line " + std::to_string(line_no) + ": duplicate slide_id '" +
                        rec.slide_id + "'");
        }
        if (manifest.class_index(rec.label) < 0) {
            throw Error("manifest line " + std::to_string(line_no) + ": label '" + rec.label +
                        "' of slide '" + rec.slide_id + "' not in class set");
        }
        manifest.records.push_back(std::move(rec));
    }
    if (manifest.class_set.empty()) {
        throw Error("manifest has no #classes: header: " + path.string());
    }

    if (validate_images) {
        std::vector<std::string> errors(manifest.records.size());
        parallel_for(manifest.records.size(), default_thread_count(), [&](std::size_t i) {
            SlideRecord& rec = manifest.records[i];
            try {
                Image img = read_image(rec.path);
                rec.width = img.width;
                rec.height = img.height;
                if (rec.width < 1 || rec.height < 1) errors[i] = "degenerate image dimensions";
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (!errors[i].empty()) {
                throw Error("manifest slide '" + manifest.records[i].slide_id + "': " + errors[i]);
            }
        }
    }
    return manifest;
}

void save_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path.string());
    out << "#classes: ";
    for (std::size_t i = 0; i < manifest.class_set.size(); ++i) {
        if (i) out << ",";
        out << manifest.class_set[i];
    }
    out << "\n";
    if (!manifest.source_note.empty()) out << "#note: " << manifest.source_note << "\n";
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    for (const auto& rec : manifest.records) {
        std::filesystem::path rel = rec.path.lexically_proximate(base);
        out << rec.slide_id << "\t" << rel.generic_string() << "\t" << rec.label << "\t"
            << split_name(rec.split) << "\n";
    }
}

std::array<std::size_t, 3> planned_split_counts(std::size_t n, const SplitRatios& ratios) {
    ratios.validate();
    auto rounded = [n](double f) {
        long long v = std::llround(static_cast<double>(n) * f);
        return static_cast<std::size_t>(std::clamp<long long>(v, 0, static_cast<long long>(n)));
    };
    std::size_t train = rounded(ratios.train_fraction);
    std::size_t val = rounded(ratios.validation_fraction);
    if (train + val > n) val = n - train;
    std::size_t test = n - train - val;
    return {train, val, test};
}

CorpusManifest split_corpus(const CorpusManifest& manifest, const SplitRatios& ratios,
                            std::uint64_t seed, bool allow_reassign,
                            const std::optional<SplitCounts>& override_counts) {
    const std::size_t n = manifest.records.size();
    if (!allow_reassign) {
        for (const auto& rec : manifest.records) {
            if (rec.split != Split::Unassigned) {
                throw Error("slide '" + rec.slide_id +
                            "' already assigned; pass allow_reassign to redo the split");
            }
        }
    }

    std::size_t n_train, n_val, n_test;
    if (override_counts) {
        n_train = override_counts->train;
        n_val = override_counts->validation;
        n_test = override_counts->test;
        if (n_train + n_val + n_test != n) {
            throw Error("override split counts sum to " + std::to_string(n_train + n_val + n_test) +
                        " but manifest has " + std::to_string(n) + " records");
        }
    } else {
        auto counts = planned_split_counts(n, ratios);
        n_train = counts[0];
        n_val = counts[1];
        n_test = counts[2];
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    CorpusManifest out = manifest;
    for (std::size_t pos = 0; pos < n; ++pos) {
        Split s = pos < n_train                ? Split::Train
                  : pos < n_train + n_val      ? Split::Validation
                                               : Split::Test;
        out.records[order[pos]].split = s;
    }
    (void)n_test;
    return out;
}

Image normalize_for_diffusion(const SlideRecord& record, int target_edge) {
    if (target_edge < 8) throw Error("normalize_for_diffusion: target edge must be >= 8");
    Image src = read_image(record.path);
    return resize_bilinear(src, target_edge, target_edge);
}

}  // namespace slidelab
