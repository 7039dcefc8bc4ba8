#pragma once

#include "typdiv/frame.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace typdiv {

enum class DistanceKind { Typological, Geographic };

std::string_view to_string(DistanceKind kind);

// Symmetric, zero-diagonal, non-negative |L| x |L| dissimilarities.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    // Validates symmetry, zero diagonal, non-negativity and id uniqueness.
    DistanceMatrix(std::vector<std::string> language_ids, std::vector<double> values,
                   DistanceKind kind, bool normalized);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& language_ids() const noexcept { return ids_; }
    DistanceKind kind() const noexcept { return kind_; }
    bool normalized() const noexcept { return normalized_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }
    std::span<const double> row(std::size_t i) const
    {
        return {values_.data() + i * ids_.size(), ids_.size()};
    }
    const std::vector<double>& values() const noexcept { return values_; }

    std::optional<std::size_t> index_of(std::string_view id) const;
    // Throws Coverage naming every id absent from the matrix.
    std::vector<std::size_t> indices_of(std::span<const std::string> ids) const;

    bool operator==(const DistanceMatrix&) const = default;

private:
    std::vector<std::string> ids_;
    std::vector<double> values_;
    DistanceKind kind_ = DistanceKind::Typological;
    bool normalized_ = false;
    std::vector<std::pair<std::string, std::size_t>> sorted_index_;
};

// Euclidean distance over the features covered in both rows, scaled by
// d / |shared|. Throws NoSharedCoverage when no feature is covered by both.
double typological_distance(std::span<const FeatureValue> a, std::span<const FeatureValue> b);

struct BuildOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

// Throws NoSharedCoverage listing every pair without shared coverage.
DistanceMatrix build_typ_matrix(const FeatureMatrix& matrix, const BuildOptions& options = {});

// Language pairs (by id, first < second) that share no covered feature.
std::vector<std::pair<std::string, std::string>> zero_coverage_pairs(const FeatureMatrix& matrix);

struct CoverageRepair {
    FeatureMatrix matrix;
    std::vector<std::string> dropped;
};

// Drops, for each pair without shared coverage, the alphabetically later id.
CoverageRepair drop_zero_coverage_languages(const FeatureMatrix& matrix);

// (x - min) / (max - min) over off-diagonal entries. Throws Degenerate when
// there are fewer than two languages or all off-diagonal values are equal.
DistanceMatrix normalize_minmax(const DistanceMatrix& dm);

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double latitude;
    double longitude;
};

// Haversine great-circle distance in kilometers.
double geographic_distance(GeoPoint a, GeoPoint b);

// Over the given ids (all records when empty), in that order.
DistanceMatrix build_geo_matrix(const LanguageTable& records,
                                std::span<const std::string> ids = {});

}  // namespace typdiv
