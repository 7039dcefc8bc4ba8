#include "typdiv/csv.hpp"
#include "typdiv/error.hpp"
#include "typdiv/frame.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace typdiv {

void BinarizationMap::add(const std::string& source, const std::string& derived,
                          const std::string& raw_value, FeatureValue mapped)
{
    if (source.empty() || derived.empty()) {
        throw Error(ErrorKind::Config, "binarization map: empty feature id");
    }
    if (is_missing_token(raw_value)) {
        throw Error(ErrorKind::Config, "binarization map: missing marker '" + raw_value +
                                           "' of '" + source + "' cannot be remapped");
    }
    auto& list = entries_[source];
    auto it = std::find_if(list.begin(), list.end(), [&](const DerivedFeature& d) { return d.id == derived; });
    if (it == list.end()) {
        list.push_back(DerivedFeature{derived, {}});
        it = std::prev(list.end());
    }
    auto [pos, inserted] = it->image.emplace(raw_value, mapped);
    if (!inserted && pos->second != mapped) {
        throw Error(ErrorKind::Config, "binarization map: conflicting images of '" + raw_value +
                                           "' in '" + derived + "'");
    }
}

void BinarizationMap::validate() const
{
    std::set<std::string, std::less<>> derived_ids;
    for (const auto& [source, list] : entries_) {
        std::set<std::string, std::less<>> raw_values;
        for (const auto& d : list) {
            if (entries_.count(d.id) != 0) {
                throw Error(ErrorKind::Config,
                            "binarization map: derived id '" + d.id + "' is also a source feature");
            }
            if (!derived_ids.insert(d.id).second) {
                throw Error(ErrorKind::Config, "binarization map: derived id '" + d.id + "' used twice");
            }
            for (const auto& [raw, value] : d.image) raw_values.insert(raw);
        }
        for (const auto& d : list) {
            for (const auto& raw : raw_values) {
                if (d.image.count(raw) == 0) {
                    throw Error(ErrorKind::Config, "binarization map: value '" + raw + "' of '" +
                                                       source + "' has no image in '" + d.id + "'");
                }
            }
        }
    }
}

bool BinarizationMap::maps(std::string_view source) const
{
    return entries_.find(source) != entries_.end();
}

const std::vector<DerivedFeature>& BinarizationMap::derived(std::string_view source) const
{
    auto it = entries_.find(source);
    if (it == entries_.end()) {
        throw Error(ErrorKind::Config, "binarization map has no entry for '" + std::string(source) + "'");
    }
    return it->second;
}

bool BinarizationMap::accepts(std::string_view source, std::string_view raw_value) const
{
    auto it = entries_.find(source);
    if (it == entries_.end() || it->second.empty()) return false;
    const auto& image = it->second.front().image;
    return image.find(raw_value) != image.end();
}

std::vector<std::string> BinarizationMap::sources() const
{
    std::vector<std::string> out;
    for (const auto& [source, list] : entries_) out.push_back(source);
    return out;
}

BinarizationMap BinarizationMap::restricted_to(std::span<const std::string> feature_ids) const
{
    BinarizationMap out;
    for (const auto& id : feature_ids) {
        auto it = entries_.find(id);
        if (it != entries_.end()) out.entries_.insert(*it);
    }
    return out;
}

BinarizationMap parse_binarization_map(std::istream& in, const std::string& source)
{
    CsvTable csv = parse_csv(in, source);
    auto src = csv.column({"source_feature"});
    auto der = csv.column({"derived_feature"});
    auto raw = csv.column({"raw_value"});
    auto mapped = csv.column({"mapped_value"});
    if (!src || !der || !raw || !mapped) {
        throw Error(ErrorKind::Config, source +
                                           ": expected columns source_feature, derived_feature, "
                                           "raw_value, mapped_value");
    }
    BinarizationMap map;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = source + ":" + std::to_string(csv.row_lines[r]);
        if (row.size() != csv.header.size()) throw Error(ErrorKind::Config, at + ": ragged row");
        auto value = parse_binary_token(row[*mapped]);
        if (!value) {
            throw Error(ErrorKind::Config, at + ": mapped_value must be 0, 1 or ?, got '" + row[*mapped] + "'");
        }
        map.add(row[*src], row[*der], row[*raw], *value);
    }
    map.validate();
    return map;
}

BinarizationMap load_binarization_map(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_binarization_map(in, path.string());
}

namespace {

struct MultistateSplit {
    const char* source;
    // Labels for "a before noun/verb", "after", "both"; codes 1, 2, 3.
    const char* first;
    const char* second;
    bool has_absent;  // code 0: the modifier category is absent
};

// Grambank's six multistate word-order features. Codes 1/2/3 are the CLDF
// values; labels are the human-readable names of the same states.
constexpr MultistateSplit kGrambankSplits[] = {
    {"GB024", "Num-N", "N-Num", false},
    {"GB025", "Dem-N", "N-Dem", false},
    {"GB065", "Possessor-Possessed", "Possessed-Possessor", false},
    {"GB130", "SV", "VS", false},
    {"GB193", "ANM-N", "N-ANM", true},
    {"GB203", "UQ-N", "N-UQ", true},
};

}  // namespace

std::string default_binarization_map_csv()
{
    std::ostringstream out;
    out << "source_feature,derived_feature,raw_value,mapped_value\n";
    for (const auto& s : kGrambankSplits) {
        const std::string a = std::string(s.source) + "a";
        const std::string b = std::string(s.source) + "b";
        struct State { const char* code; const char* label; int in_a; int in_b; };
        const State states[] = {
            {"1", s.first, 1, 0},
            {"2", s.second, 0, 1},
            {"3", "both", 1, 1},
        };
        for (const auto& derived : {a, b}) {
            const bool is_a = derived == a;
            if (s.has_absent) out << s.source << ',' << derived << ",0,0\n";
            for (const auto& st : states) {
                const int v = is_a ? st.in_a : st.in_b;
                out << s.source << ',' << derived << ',' << st.code << ',' << v << '\n';
                out << s.source << ',' << derived << ',' << st.label << ',' << v << '\n';
            }
        }
    }
    return out.str();
}

const BinarizationMap& default_binarization_map()
{
    static const BinarizationMap map = [] {
        std::istringstream in(default_binarization_map_csv());
        return parse_binarization_map(in, "<default binarization map>");
    }();
    return map;
}

FeatureMatrix binarize(const FeatureMatrix& matrix, const BinarizationMap& map)
{
    for (const auto& source : map.sources()) {
        if (!matrix.feature_index(source)) {
            throw Error(ErrorKind::Config, "binarization map references absent feature '" + source + "'");
        }
    }

    std::vector<std::string> features;
    for (const auto& f : matrix.feature_ids()) {
        if (!map.maps(f)) {
            features.push_back(f);
            continue;
        }
        for (const auto& d : map.derived(f)) {
            if (matrix.feature_index(d.id)) {
                throw Error(ErrorKind::Config, "derived feature '" + d.id + "' already exists in the matrix");
            }
            features.push_back(d.id);
        }
    }

    FeatureMatrixBuilder builder(features);
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        builder.add_language(matrix.language_ids()[r]);
        std::size_t out = 0;
        for (std::size_t f = 0; f < matrix.dimension(); ++f) {
            const auto& fid = matrix.feature_ids()[f];
            if (!map.maps(fid)) {
                if (matrix.is_raw(r, f)) builder.set_raw(out, matrix.token(r, f));
                else builder.set_value(out, matrix.value(r, f));
                ++out;
                continue;
            }
            const bool missing = !matrix.is_raw(r, f) && matrix.value(r, f) == FeatureValue::Missing;
            const std::string_view token = matrix.token(r, f);
            for (const auto& d : map.derived(fid)) {
                if (missing) {
                    builder.set_value(out++, FeatureValue::Missing);
                    continue;
                }
                auto it = d.image.find(token);
                if (it == d.image.end()) {
                    throw Error(ErrorKind::Config, "value '" + std::string(token) + "' of feature '" +
                                                       fid + "' (language '" + matrix.language_ids()[r] +
                                                       "') has no image in the binarization map");
                }
                builder.set_value(out++, it->second);
            }
        }
    }
    return std::move(builder).build();
}

}  // namespace typdiv
