#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace typdiv {

enum class FeatureValue : std::uint8_t { Zero = 0, One = 1, Missing = 2 };

// Maps `0`/`1` to Zero/One and the missing markers (``, `?`, `no_cov`) to
// Missing. Any other token yields nullopt.
std::optional<FeatureValue> parse_binary_token(std::string_view token);
bool is_missing_token(std::string_view token);

// Languages x features grid. Cells are binary values or, before
// binarization, raw multistate tokens such as "Num-N".
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    // Binary constructor; cells are row-major.
    FeatureMatrix(std::vector<std::string> language_ids, std::vector<std::string> feature_ids,
                  std::vector<FeatureValue> cells);

    static FeatureMatrix from_rows(std::vector<std::string> language_ids,
                                   std::vector<std::string> feature_ids,
                                   const std::vector<std::vector<FeatureValue>>& rows);

    std::size_t num_languages() const noexcept { return language_ids_.size(); }
    std::size_t dimension() const noexcept { return feature_ids_.size(); }
    bool empty() const noexcept { return language_ids_.empty(); }

    const std::vector<std::string>& language_ids() const noexcept { return language_ids_; }
    const std::vector<std::string>& feature_ids() const noexcept { return feature_ids_; }

    std::optional<std::size_t> language_index(std::string_view id) const;
    std::optional<std::size_t> feature_index(std::string_view id) const;

    // Throws Config if the cell still holds a raw multistate token.
    FeatureValue value(std::size_t language, std::size_t feature) const;
    bool is_raw(std::size_t language, std::size_t feature) const;
    bool is_binary() const;
    // Canonical text of a cell: `0`, `1`, `?` for Missing, or the raw token.
    std::string_view token(std::size_t language, std::size_t feature) const;

    // Binary view of a row. Throws Config when any cell is raw.
    std::vector<FeatureValue> row(std::size_t language) const;

    std::size_t missing_count(std::size_t language) const;
    double missing_proportion(std::size_t language) const;

    FeatureMatrix select_languages(std::span<const std::size_t> rows) const;
    FeatureMatrix select_features(std::span<const std::size_t> columns) const;

    bool operator==(const FeatureMatrix& other) const;

private:
    friend class FeatureMatrixBuilder;

    using Code = std::uint16_t;
    static constexpr Code kFirstRaw = 3;

    Code code(std::size_t language, std::size_t feature) const
    {
        return codes_[language * feature_ids_.size() + feature];
    }
    void check_unique() const;

    std::vector<std::string> language_ids_;
    std::vector<std::string> feature_ids_;
    std::vector<Code> codes_;
    std::vector<std::string> raw_tokens_;
};

// Row-by-row construction from text tokens, interning raw tokens.
class FeatureMatrixBuilder {
public:
    explicit FeatureMatrixBuilder(std::vector<std::string> feature_ids);

    void add_language(std::string id);
    void set_value(std::size_t feature, FeatureValue value);
    void set_raw(std::size_t feature, std::string_view token);
    FeatureMatrix build() &&;

private:
    FeatureMatrix matrix_;
    std::unordered_map<std::string, FeatureMatrix::Code> token_codes_;
};

struct LanguageRecord {
    std::string glottocode;
    std::string name;
    std::optional<std::string> family;
    std::optional<std::string> genus;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::optional<int> child_count;

    bool has_coordinates() const { return latitude.has_value() && longitude.has_value(); }
};

class LanguageTable {
public:
    LanguageTable() = default;
    explicit LanguageTable(std::vector<LanguageRecord> records);

    const std::vector<LanguageRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    const LanguageRecord* find(std::string_view glottocode) const;
    // Adds a record with every optional field absent, unless one exists.
    void ensure(const std::string& glottocode);

private:
    std::vector<LanguageRecord> records_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// Accepts Grambank/Glottolog style headers: ID|Glottocode, Name,
// Family_name|family, Genus|genus, Latitude, Longitude, child_count.
LanguageTable load_language_table(const std::filesystem::path& path);
LanguageTable parse_language_table(std::istream& in, const std::string& source);

// Per multistate feature: the derived binary features and, for each, the image
// of every raw value. Missing markers map to Missing implicitly.
struct DerivedFeature {
    std::string id;
    std::map<std::string, FeatureValue, std::less<>> image;
};

class BinarizationMap {
public:
    BinarizationMap() = default;

    void add(const std::string& source, const std::string& derived, const std::string& raw_value,
             FeatureValue mapped);
    // Checks id disjointness and that every raw value has an image in every
    // derived feature of its source.
    void validate() const;

    bool maps(std::string_view source) const;
    const std::vector<DerivedFeature>& derived(std::string_view source) const;
    bool accepts(std::string_view source, std::string_view raw_value) const;
    std::vector<std::string> sources() const;
    std::size_t size() const noexcept { return entries_.size(); }
    // Copy keeping only the sources that appear in `feature_ids`.
    BinarizationMap restricted_to(std::span<const std::string> feature_ids) const;

private:
    std::map<std::string, std::vector<DerivedFeature>, std::less<>> entries_;
};

// Grambank's split of its six multistate word-order features into a/b pairs.
const BinarizationMap& default_binarization_map();
// Same content as the default map, in the on-disk config format.
std::string default_binarization_map_csv();

BinarizationMap load_binarization_map(const std::filesystem::path& path);
BinarizationMap parse_binarization_map(std::istream& in, const std::string& source);

FeatureMatrix load_wide_csv(const std::filesystem::path& path);
// Columns named in `map` additionally accept that feature's raw values.
FeatureMatrix load_wide_csv(const std::filesystem::path& path, const BinarizationMap& map);
FeatureMatrix parse_wide_csv(std::istream& in, const std::string& source,
                             const BinarizationMap* map = nullptr);
void save_wide_csv(std::ostream& out, const FeatureMatrix& matrix);

struct CldfData {
    FeatureMatrix matrix;
    LanguageTable languages;
};

CldfData load_cldf(const std::filesystem::path& values_path,
                   const std::filesystem::path& languages_path,
                   const BinarizationMap* map = nullptr);
CldfData parse_cldf(std::istream& values, std::istream& languages,
                    const BinarizationMap* map = nullptr);

FeatureMatrix binarize(const FeatureMatrix& matrix, const BinarizationMap& map);

inline constexpr double kDefaultCropThreshold = 0.25;

// Drops languages whose Missing proportion is strictly above `threshold`.
FeatureMatrix crop_languages(const FeatureMatrix& matrix, double threshold = kDefaultCropThreshold);

// Drops non-leaf Glottolog nodes (child_count > 0).
FeatureMatrix remove_macrolanguages(const FeatureMatrix& matrix, const LanguageTable& records);

FeatureMatrix subselect_features(const FeatureMatrix& matrix,
                                 std::span<const std::string> feature_ids);

}  // namespace typdiv
