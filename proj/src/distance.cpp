#include "typdiv/distance.hpp"

#include "typdiv/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <thread>

namespace typdiv {

std::string_view to_string(DistanceKind kind)
{
    return kind == DistanceKind::Typological ? "typological" : "geographic";
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> language_ids, std::vector<double> values,
                               DistanceKind kind, bool normalized)
    : ids_(std::move(language_ids)), values_(std::move(values)), kind_(kind), normalized_(normalized)
{
    const std::size_t n = ids_.size();
    if (values_.size() != n * n) {
        throw Error(ErrorKind::Argument, "distance matrix: expected " + std::to_string(n * n) +
                                             " values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) {
            throw Error(ErrorKind::Validation, "distance matrix: non-zero diagonal at '" + ids_[i] + "'");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double x = at(i, j);
            if (!std::isfinite(x) || x < 0.0) {
                throw Error(ErrorKind::Validation, "distance matrix: invalid distance between '" +
                                                       ids_[i] + "' and '" + ids_[j] + "'");
            }
            if (x != at(j, i)) {
                throw Error(ErrorKind::Validation, "distance matrix: asymmetric entry for '" + ids_[i] +
                                                       "' and '" + ids_[j] + "'");
            }
        }
    }
    sorted_index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sorted_index_.emplace_back(ids_[i], i);
    std::sort(sorted_index_.begin(), sorted_index_.end());
    for (std::size_t i = 1; i < n; ++i) {
        if (sorted_index_[i].first == sorted_index_[i - 1].first) {
            throw Error(ErrorKind::DuplicateLanguage,
                        "distance matrix: duplicate language id '" + sorted_index_[i].first + "'");
        }
    }
}

std::optional<std::size_t> DistanceMatrix::index_of(std::string_view id) const
{
    auto it = std::lower_bound(sorted_index_.begin(), sorted_index_.end(), id,
                               [](const auto& entry, std::string_view key) { return entry.first < key; });
    if (it == sorted_index_.end() || it->first != id) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> DistanceMatrix::indices_of(std::span<const std::string> ids) const
{
    std::vector<std::size_t> out;
    std::string missing;
    for (const auto& id : ids) {
        if (auto i = index_of(id)) {
            out.push_back(*i);
        } else {
            missing += (missing.empty() ? "" : ", ") + id;
        }
    }
    if (!missing.empty()) {
        throw Error(ErrorKind::Coverage, "languages absent from the distance matrix: " + missing);
    }
    return out;
}

double typological_distance(std::span<const FeatureValue> a, std::span<const FeatureValue> b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorKind::Argument, "typological distance: rows differ in length");
    }
    std::size_t shared = 0;
    double sum = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (a[f] == FeatureValue::Missing || b[f] == FeatureValue::Missing) continue;
        ++shared;
        const double diff = static_cast<double>(a[f] == FeatureValue::One) -
                            static_cast<double>(b[f] == FeatureValue::One);
        sum += diff * diff;
    }
    if (shared == 0) {
        throw Error(ErrorKind::NoSharedCoverage, "typological distance: no feature covered by both languages");
    }
    const double weight = static_cast<double>(a.size()) / static_cast<double>(shared);
    return std::sqrt(weight * sum);
}

namespace {

// Bit-packed coverage and value masks of one language.
struct PackedRow {
    std::vector<std::uint64_t> covered;
    std::vector<std::uint64_t> ones;
};

std::vector<PackedRow> pack(const FeatureMatrix& matrix)
{
    const std::size_t words = (matrix.dimension() + 63) / 64;
    std::vector<PackedRow> rows(matrix.num_languages());
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        rows[r].covered.assign(words, 0);
        rows[r].ones.assign(words, 0);
        for (std::size_t f = 0; f < matrix.dimension(); ++f) {
            const FeatureValue v = matrix.value(r, f);
            if (v == FeatureValue::Missing) continue;
            const std::uint64_t bit = std::uint64_t{1} << (f % 64);
            rows[r].covered[f / 64] |= bit;
            if (v == FeatureValue::One) rows[r].ones[f / 64] |= bit;
        }
    }
    return rows;
}

struct PairCounts {
    std::size_t shared = 0;
    std::size_t differing = 0;
};

PairCounts count_pair(const PackedRow& a, const PackedRow& b)
{
    PairCounts c;
    for (std::size_t w = 0; w < a.covered.size(); ++w) {
        const std::uint64_t both = a.covered[w] & b.covered[w];
        c.shared += static_cast<std::size_t>(std::popcount(both));
        c.differing += static_cast<std::size_t>(std::popcount((a.ones[w] ^ b.ones[w]) & both));
    }
    return c;
}

std::vector<std::pair<std::size_t, std::size_t>> uncovered_index_pairs(const std::vector<PackedRow>& rows)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (count_pair(rows[i], rows[j]).shared == 0) out.emplace_back(i, j);
        }
    }
    return out;
}

std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b)
{
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> zero_coverage_pairs(const FeatureMatrix& matrix)
{
    const auto& ids = matrix.language_ids();
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [i, j] : uncovered_index_pairs(pack(matrix))) out.push_back(ordered(ids[i], ids[j]));
    std::sort(out.begin(), out.end());
    return out;
}

CoverageRepair drop_zero_coverage_languages(const FeatureMatrix& matrix)
{
    std::set<std::string> dropped;
    for (const auto& [first, second] : zero_coverage_pairs(matrix)) {
        if (dropped.count(first) == 0 && dropped.count(second) == 0) dropped.insert(second);
    }
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        if (dropped.count(matrix.language_ids()[r]) == 0) keep.push_back(r);
    }
    return {matrix.select_languages(keep), {dropped.begin(), dropped.end()}};
}

DistanceMatrix build_typ_matrix(const FeatureMatrix& matrix, const BuildOptions& options)
{
    const std::size_t n = matrix.num_languages();
    const std::size_t d = matrix.dimension();
    if (n == 0) throw Error(ErrorKind::Argument, "cannot build a distance matrix without languages");

    const std::vector<PackedRow> rows = pack(matrix);

    if (auto bad = uncovered_index_pairs(rows); !bad.empty()) {
        std::vector<std::pair<std::string, std::string>> named;
        for (auto [i, j] : bad) named.push_back(ordered(matrix.language_ids()[i], matrix.language_ids()[j]));
        std::sort(named.begin(), named.end());
        std::string msg = std::to_string(named.size()) + " language pair(s) share no covered feature:";
        for (const auto& [a, b] : named) msg += " (" + a + ", " + b + ")";
        throw Error(ErrorKind::NoSharedCoverage, msg);
    }

    std::vector<double> values(n * n, 0.0);
    auto fill_rows = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const PairCounts c = count_pair(rows[i], rows[j]);
                const double weight = static_cast<double>(d) / static_cast<double>(c.shared);
                const double dist = std::sqrt(weight * static_cast<double>(c.differing));
                values[i * n + j] = dist;
                values[j * n + i] = dist;
            }
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) workers.emplace_back(fill_rows, t, threads);
    }

    return DistanceMatrix(matrix.language_ids(), std::move(values), DistanceKind::Typological, false);
}

DistanceMatrix normalize_minmax(const DistanceMatrix& dm)
{
    const std::size_t n = dm.size();
    if (n < 2) throw Error(ErrorKind::Degenerate, "normalization needs at least two languages");
    double lo = dm.at(0, 1);
    double hi = lo;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            lo = std::min(lo, dm.at(i, j));
            hi = std::max(hi, dm.at(i, j));
        }
    }
    if (hi == lo) throw Error(ErrorKind::Degenerate, "all off-diagonal distances are equal; cannot normalize");

    std::vector<double> values(dm.values());
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) values[i * n + j] = (values[i * n + j] - lo) / range;
        }
    }
    return DistanceMatrix(dm.language_ids(), std::move(values), dm.kind(), true);
}

double geographic_distance(GeoPoint a, GeoPoint b)
{
    for (const GeoPoint& p : {a, b}) {
        if (!(p.latitude >= -90.0 && p.latitude <= 90.0) || !(p.longitude >= -180.0 && p.longitude <= 180.0)) {
            throw Error(ErrorKind::Validation, "coordinate (" + std::to_string(p.latitude) + ", " +
                                                   std::to_string(p.longitude) + ") out of range");
        }
    }
    constexpr double to_rad = std::numbers::pi / 180.0;
    const double phi1 = a.latitude * to_rad;
    const double phi2 = b.latitude * to_rad;
    const double dphi = (b.latitude - a.latitude) * to_rad;
    const double dlambda = (b.longitude - a.longitude) * to_rad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

DistanceMatrix build_geo_matrix(const LanguageTable& records, std::span<const std::string> ids)
{
    std::vector<std::string> order;
    if (ids.empty()) {
        for (const auto& r : records.records()) order.push_back(r.glottocode);
    } else {
        order.assign(ids.begin(), ids.end());
    }

    std::vector<GeoPoint> points;
    for (const auto& id : order) {
        const LanguageRecord* rec = records.find(id);
        if (rec == nullptr) throw Error(ErrorKind::Metadata, "no metadata record for language '" + id + "'");
        if (!rec->has_coordinates()) throw Error(ErrorKind::Metadata, "language '" + id + "' has no coordinates");
        points.push_back({*rec->latitude, *rec->longitude});
    }

    const std::size_t n = order.size();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double km = geographic_distance(points[i], points[j]);
            values[i * n + j] = km;
            values[j * n + i] = km;
        }
    }
    return DistanceMatrix(std::move(order), std::move(values), DistanceKind::Geographic, false);
}

}  // namespace typdiv
