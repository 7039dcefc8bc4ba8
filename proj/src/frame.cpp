#include "typdiv/frame.hpp"

#include "typdiv/csv.hpp"
#include "typdiv/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace typdiv {

namespace {

std::string where(const std::string& source, std::size_t line)
{
    return source + ":" + std::to_string(line);
}

std::optional<double> parse_double(const std::string& text)
{
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

std::optional<FeatureValue> parse_binary_token(std::string_view token)
{
    if (token == "0") return FeatureValue::Zero;
    if (token == "1") return FeatureValue::One;
    if (is_missing_token(token)) return FeatureValue::Missing;
    return std::nullopt;
}

bool is_missing_token(std::string_view token)
{
    return token.empty() || token == "?" || token == "no_cov";
}

// --- FeatureMatrix ---------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::vector<std::string> language_ids,
                             std::vector<std::string> feature_ids, std::vector<FeatureValue> cells)
    : language_ids_(std::move(language_ids)), feature_ids_(std::move(feature_ids))
{
    if (cells.size() != language_ids_.size() * feature_ids_.size()) {
        throw Error(ErrorKind::Argument, "feature matrix: cell count does not match dimensions");
    }
    codes_.reserve(cells.size());
    for (FeatureValue v : cells) codes_.push_back(static_cast<Code>(v));
    check_unique();
}

FeatureMatrix FeatureMatrix::from_rows(std::vector<std::string> language_ids,
                                       std::vector<std::string> feature_ids,
                                       const std::vector<std::vector<FeatureValue>>& rows)
{
    std::vector<FeatureValue> cells;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != feature_ids.size()) {
            throw Error(ErrorKind::Parse, "row " + std::to_string(r) + " has " +
                                              std::to_string(rows[r].size()) + " cells, expected " +
                                              std::to_string(feature_ids.size()));
        }
        cells.insert(cells.end(), rows[r].begin(), rows[r].end());
    }
    return FeatureMatrix(std::move(language_ids), std::move(feature_ids), std::move(cells));
}

void FeatureMatrix::check_unique() const
{
    std::unordered_set<std::string_view> seen;
    for (const auto& id : language_ids_) {
        if (!seen.insert(id).second) {
            throw Error(ErrorKind::DuplicateLanguage, "duplicate language id '" + id + "'");
        }
    }
    seen.clear();
    for (const auto& id : feature_ids_) {
        if (!seen.insert(id).second) {
            throw Error(ErrorKind::DuplicateFeature, "duplicate feature id '" + id + "'");
        }
    }
}

std::optional<std::size_t> FeatureMatrix::language_index(std::string_view id) const
{
    auto it = std::find(language_ids_.begin(), language_ids_.end(), id);
    if (it == language_ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - language_ids_.begin());
}

std::optional<std::size_t> FeatureMatrix::feature_index(std::string_view id) const
{
    auto it = std::find(feature_ids_.begin(), feature_ids_.end(), id);
    if (it == feature_ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - feature_ids_.begin());
}

FeatureValue FeatureMatrix::value(std::size_t language, std::size_t feature) const
{
    Code c = code(language, feature);
    if (c >= kFirstRaw) {
        throw Error(ErrorKind::Config, "feature '" + feature_ids_[feature] + "' of language '" +
                                           language_ids_[language] + "' holds multistate value '" +
                                           raw_tokens_[c - kFirstRaw] + "'; binarize first");
    }
    return static_cast<FeatureValue>(c);
}

bool FeatureMatrix::is_raw(std::size_t language, std::size_t feature) const
{
    return code(language, feature) >= kFirstRaw;
}

bool FeatureMatrix::is_binary() const
{
    return std::all_of(codes_.begin(), codes_.end(), [](Code c) { return c < kFirstRaw; });
}

std::string_view FeatureMatrix::token(std::size_t language, std::size_t feature) const
{
    switch (Code c = code(language, feature)) {
    case 0: return "0";
    case 1: return "1";
    case 2: return "?";
    default: return raw_tokens_[c - kFirstRaw];
    }
}

std::vector<FeatureValue> FeatureMatrix::row(std::size_t language) const
{
    std::vector<FeatureValue> out(dimension());
    for (std::size_t f = 0; f < dimension(); ++f) out[f] = value(language, f);
    return out;
}

std::size_t FeatureMatrix::missing_count(std::size_t language) const
{
    std::size_t n = 0;
    for (std::size_t f = 0; f < dimension(); ++f) {
        if (code(language, f) == static_cast<Code>(FeatureValue::Missing)) ++n;
    }
    return n;
}

double FeatureMatrix::missing_proportion(std::size_t language) const
{
    if (dimension() == 0) return 0.0;
    return static_cast<double>(missing_count(language)) / static_cast<double>(dimension());
}

FeatureMatrix FeatureMatrix::select_languages(std::span<const std::size_t> rows) const
{
    FeatureMatrix out;
    out.feature_ids_ = feature_ids_;
    out.raw_tokens_ = raw_tokens_;
    out.codes_.reserve(rows.size() * dimension());
    for (std::size_t r : rows) {
        out.language_ids_.push_back(language_ids_.at(r));
        auto begin = codes_.begin() + static_cast<std::ptrdiff_t>(r * dimension());
        out.codes_.insert(out.codes_.end(), begin, begin + static_cast<std::ptrdiff_t>(dimension()));
    }
    out.check_unique();
    return out;
}

FeatureMatrix FeatureMatrix::select_features(std::span<const std::size_t> columns) const
{
    FeatureMatrix out;
    out.language_ids_ = language_ids_;
    out.raw_tokens_ = raw_tokens_;
    for (std::size_t c : columns) out.feature_ids_.push_back(feature_ids_.at(c));
    out.codes_.reserve(num_languages() * columns.size());
    for (std::size_t r = 0; r < num_languages(); ++r) {
        for (std::size_t c : columns) out.codes_.push_back(code(r, c));
    }
    out.check_unique();
    return out;
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const
{
    if (language_ids_ != other.language_ids_ || feature_ids_ != other.feature_ids_) return false;
    for (std::size_t r = 0; r < num_languages(); ++r) {
        for (std::size_t f = 0; f < dimension(); ++f) {
            if (is_raw(r, f) != other.is_raw(r, f) || token(r, f) != other.token(r, f)) return false;
        }
    }
    return true;
}

// --- FeatureMatrixBuilder --------------------------------------------------

FeatureMatrixBuilder::FeatureMatrixBuilder(std::vector<std::string> feature_ids)
{
    matrix_.feature_ids_ = std::move(feature_ids);
}

void FeatureMatrixBuilder::add_language(std::string id)
{
    matrix_.language_ids_.push_back(std::move(id));
    matrix_.codes_.resize(matrix_.codes_.size() + matrix_.dimension(),
                          static_cast<FeatureMatrix::Code>(FeatureValue::Missing));
}

void FeatureMatrixBuilder::set_value(std::size_t feature, FeatureValue value)
{
    std::size_t row = matrix_.num_languages() - 1;
    matrix_.codes_[row * matrix_.dimension() + feature] = static_cast<FeatureMatrix::Code>(value);
}

void FeatureMatrixBuilder::set_raw(std::size_t feature, std::string_view token)
{
    auto [it, inserted] = token_codes_.try_emplace(
        std::string(token), static_cast<FeatureMatrix::Code>(FeatureMatrix::kFirstRaw +
                                                             matrix_.raw_tokens_.size()));
    if (inserted) matrix_.raw_tokens_.emplace_back(token);
    std::size_t row = matrix_.num_languages() - 1;
    matrix_.codes_[row * matrix_.dimension() + feature] = it->second;
}

FeatureMatrix FeatureMatrixBuilder::build() &&
{
    matrix_.check_unique();
    return std::move(matrix_);
}

// --- LanguageTable ---------------------------------------------------------

LanguageTable::LanguageTable(std::vector<LanguageRecord> records) : records_(std::move(records))
{
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (!index_.emplace(r.glottocode, i).second) {
            throw Error(ErrorKind::DuplicateLanguage,
                        "duplicate glottocode '" + r.glottocode + "' in language table");
        }
        if (r.latitude && (*r.latitude < -90.0 || *r.latitude > 90.0)) {
            throw Error(ErrorKind::Validation, "latitude of '" + r.glottocode + "' out of range");
        }
        if (r.longitude && (*r.longitude < -180.0 || *r.longitude > 180.0)) {
            throw Error(ErrorKind::Validation, "longitude of '" + r.glottocode + "' out of range");
        }
        if (r.child_count && *r.child_count < 0) {
            throw Error(ErrorKind::Validation, "negative child count for '" + r.glottocode + "'");
        }
    }
}

const LanguageRecord* LanguageTable::find(std::string_view glottocode) const
{
    auto it = index_.find(glottocode);
    return it == index_.end() ? nullptr : &records_[it->second];
}

void LanguageTable::ensure(const std::string& glottocode)
{
    if (find(glottocode) != nullptr) return;
    index_.emplace(glottocode, records_.size());
    records_.push_back(LanguageRecord{glottocode, {}, {}, {}, {}, {}, {}});
}

LanguageTable parse_language_table(std::istream& in, const std::string& source)
{
    CsvTable csv = parse_csv(in, source);
    auto id_col = csv.column({"glottocode", "ID", "Language_ID"});
    if (!id_col) throw Error(ErrorKind::Parse, source + ": no glottocode/ID column");
    auto name_col = csv.column({"Name", "name"});
    auto family_col = csv.column({"Family_name", "family", "Family"});
    auto genus_col = csv.column({"Genus", "genus"});
    auto lat_col = csv.column({"Latitude", "lat"});
    auto lon_col = csv.column({"Longitude", "lon", "lng"});
    auto child_col = csv.column({"child_count", "children", "Child_count", "n_children"});

    std::vector<LanguageRecord> records;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = where(source, csv.row_lines[r]);
        if (row.size() != csv.header.size()) {
            throw Error(ErrorKind::Parse, at + ": expected " + std::to_string(csv.header.size()) +
                                              " cells, found " + std::to_string(row.size()));
        }
        LanguageRecord rec;
        rec.glottocode = row[*id_col];
        if (rec.glottocode.empty()) throw Error(ErrorKind::Parse, at + ": empty language id");
        if (name_col) rec.name = row[*name_col];
        auto optional_text = [&](std::optional<std::size_t> col) -> std::optional<std::string> {
            if (!col || row[*col].empty()) return std::nullopt;
            return row[*col];
        };
        auto optional_number = [&](std::optional<std::size_t> col,
                                   const char* what) -> std::optional<double> {
            if (!col || row[*col].empty()) return std::nullopt;
            auto v = parse_double(row[*col]);
            if (!v) throw Error(ErrorKind::Parse, at + ": bad " + std::string(what) + " '" + row[*col] + "'");
            return v;
        };
        rec.family = optional_text(family_col);
        rec.genus = optional_text(genus_col);
        rec.latitude = optional_number(lat_col, "latitude");
        rec.longitude = optional_number(lon_col, "longitude");
        if (auto c = optional_number(child_col, "child count")) {
            if (*c < 0 || *c != static_cast<double>(static_cast<int>(*c))) {
                throw Error(ErrorKind::Parse, at + ": child count must be a non-negative integer");
            }
            rec.child_count = static_cast<int>(*c);
        }
        records.push_back(std::move(rec));
    }
    return LanguageTable(std::move(records));
}

LanguageTable load_language_table(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_language_table(in, path.string());
}

// --- Wide CSV ----------------------------------------------------------------

namespace {

// Stores one text cell, honouring mapped multistate columns.
void store_token(FeatureMatrixBuilder& builder, std::size_t feature, const std::string& feature_id,
                 const std::string& token, const BinarizationMap* map, const std::string& at)
{
    if (is_missing_token(token)) {
        builder.set_value(feature, FeatureValue::Missing);
        return;
    }
    if (map != nullptr && map->maps(feature_id)) {
        if (!map->accepts(feature_id, token)) {
            throw Error(ErrorKind::Parse, at + ": column '" + feature_id +
                                              "': value '" + token + "' not in binarization map");
        }
        builder.set_raw(feature, token);
        return;
    }
    auto v = parse_binary_token(token);
    if (!v) {
        throw Error(ErrorKind::Parse,
                    at + ": column '" + feature_id + "': unrecognized value '" + token + "'");
    }
    builder.set_value(feature, *v);
}

}  // namespace

FeatureMatrix parse_wide_csv(std::istream& in, const std::string& source, const BinarizationMap* map)
{
    CsvTable csv = parse_csv(in, source);
    if (csv.header.empty()) throw Error(ErrorKind::Parse, source + ": missing header row");

    std::vector<std::string> features(csv.header.begin() + 1, csv.header.end());
    std::set<std::string> seen_features;
    for (std::size_t f = 0; f < features.size(); ++f) {
        if (features[f].empty()) {
            throw Error(ErrorKind::Parse, source + ":1: empty feature id in column " + std::to_string(f + 2));
        }
        if (!seen_features.insert(features[f]).second) {
            throw Error(ErrorKind::DuplicateFeature,
                        source + ":1: duplicate feature id '" + features[f] + "'");
        }
    }

    FeatureMatrixBuilder builder(features);
    std::set<std::string> seen_languages;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = where(source, csv.row_lines[r]);
        if (row.size() != csv.header.size()) {
            throw Error(ErrorKind::Parse, at + ": ragged row with " + std::to_string(row.size()) +
                                              " cells, expected " + std::to_string(csv.header.size()));
        }
        if (row[0].empty()) throw Error(ErrorKind::Parse, at + ": empty language id");
        if (!seen_languages.insert(row[0]).second) {
            throw Error(ErrorKind::DuplicateLanguage, at + ": duplicate language id '" + row[0] + "'");
        }
        builder.add_language(row[0]);
        for (std::size_t f = 0; f < features.size(); ++f) {
            store_token(builder, f, features[f], row[f + 1], map, at);
        }
    }
    return std::move(builder).build();
}

FeatureMatrix load_wide_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_wide_csv(in, path.string());
}

FeatureMatrix load_wide_csv(const std::filesystem::path& path, const BinarizationMap& map)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_wide_csv(in, path.string(), &map);
}

void save_wide_csv(std::ostream& out, const FeatureMatrix& matrix)
{
    out << "glottocode";
    for (const auto& f : matrix.feature_ids()) out << ',' << csv_field(f);
    out << '\n';
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        out << csv_field(matrix.language_ids()[r]);
        for (std::size_t f = 0; f < matrix.dimension(); ++f) out << ',' << csv_field(matrix.token(r, f));
        out << '\n';
    }
}

// --- CLDF --------------------------------------------------------------------

CldfData parse_cldf(std::istream& values, std::istream& languages, const BinarizationMap* map)
{
    CsvTable csv = parse_csv(values, "values.csv");
    auto lang_col = csv.column({"Language_ID"});
    auto param_col = csv.column({"Parameter_ID"});
    auto value_col = csv.column({"Value"});
    if (!lang_col || !param_col || !value_col) {
        throw Error(ErrorKind::Parse,
                    "values.csv: expected columns Language_ID, Parameter_ID, Value");
    }

    std::vector<std::string> language_order;
    std::vector<std::string> feature_order;
    std::map<std::string, std::size_t> language_pos;
    std::map<std::string, std::size_t> feature_pos;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::string, std::size_t>> cells;

    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        const auto& row = csv.rows[r];
        const std::string at = where(csv.source, csv.row_lines[r]);
        if (row.size() != csv.header.size()) {
            throw Error(ErrorKind::Parse, at + ": expected " + std::to_string(csv.header.size()) +
                                              " cells, found " + std::to_string(row.size()));
        }
        const std::string& lang = row[*lang_col];
        const std::string& param = row[*param_col];
        if (lang.empty() || param.empty()) throw Error(ErrorKind::Parse, at + ": empty language or parameter id");
        auto [li, lnew] = language_pos.try_emplace(lang, language_order.size());
        if (lnew) language_order.push_back(lang);
        auto [fi, fnew] = feature_pos.try_emplace(param, feature_order.size());
        if (fnew) feature_order.push_back(param);

        std::string value = row[*value_col];
        if (is_missing_token(value)) value = "?";
        auto key = std::make_pair(li->second, fi->second);
        auto [ci, inserted] = cells.try_emplace(key, value, csv.row_lines[r]);
        if (!inserted && ci->second.first != value) {
            throw Error(ErrorKind::Conflict,
                        at + ": conflicting values for (" + lang + ", " + param + "): '" +
                            ci->second.first + "' (line " + std::to_string(ci->second.second) +
                            ") vs '" + value + "'");
        }
    }

    FeatureMatrixBuilder builder(feature_order);
    auto cell = cells.begin();
    for (std::size_t l = 0; l < language_order.size(); ++l) {
        builder.add_language(language_order[l]);
        for (; cell != cells.end() && cell->first.first == l; ++cell) {
            std::size_t f = cell->first.second;
            store_token(builder, f, feature_order[f], cell->second.first, map,
                        where(csv.source, cell->second.second));
        }
    }

    CldfData data{std::move(builder).build(), parse_language_table(languages, "languages.csv")};
    for (const auto& id : language_order) data.languages.ensure(id);
    return data;
}

CldfData load_cldf(const std::filesystem::path& values_path,
                   const std::filesystem::path& languages_path, const BinarizationMap* map)
{
    std::ifstream values(values_path, std::ios::binary);
    if (!values) throw Error(ErrorKind::Io, "cannot open " + values_path.string());
    std::ifstream languages(languages_path, std::ios::binary);
    if (!languages) throw Error(ErrorKind::Io, "cannot open " + languages_path.string());
    return parse_cldf(values, languages, map);
}

// --- Preprocessing -----------------------------------------------------------

FeatureMatrix crop_languages(const FeatureMatrix& matrix, double threshold)
{
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorKind::Argument, "crop threshold must lie in [0, 1]");
    }
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        if (!(matrix.missing_proportion(r) > threshold)) keep.push_back(r);
    }
    return matrix.select_languages(keep);
}

FeatureMatrix remove_macrolanguages(const FeatureMatrix& matrix, const LanguageTable& records)
{
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        const auto& id = matrix.language_ids()[r];
        const LanguageRecord* rec = records.find(id);
        if (rec == nullptr) {
            throw Error(ErrorKind::Metadata, "no metadata record for language '" + id + "'");
        }
        if (!rec->child_count) {
            throw Error(ErrorKind::Metadata, "no child count for language '" + id + "'");
        }
        if (*rec->child_count == 0) keep.push_back(r);
    }
    return matrix.select_languages(keep);
}

FeatureMatrix subselect_features(const FeatureMatrix& matrix, std::span<const std::string> feature_ids)
{
    std::vector<std::size_t> columns;
    columns.reserve(feature_ids.size());
    for (const auto& id : feature_ids) {
        auto idx = matrix.feature_index(id);
        if (!idx) throw Error(ErrorKind::UnknownFeature, "unknown feature id '" + id + "'");
        columns.push_back(*idx);
    }
    return matrix.select_features(columns);
}

}  // namespace typdiv
