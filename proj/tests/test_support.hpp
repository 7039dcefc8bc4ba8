#pragma once

#include "typdiv/distance.hpp"
#include "typdiv/frame.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace typdiv::testing {

inline std::filesystem::path temp_dir()
{
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("typdiv_tests_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::filesystem::path write_temp(const std::string& name, const std::string& content)
{
    auto path = temp_dir() / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

// Small deterministic generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    double unit() { return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

inline std::string lang_id(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "lang%04zu", i);
    return buf;
}

// Random binary matrix; each cell Missing with probability `missing`, and
// every row keeps its first feature covered so all pairs share coverage.
inline FeatureMatrix random_matrix(Gen& gen, std::size_t n, std::size_t d, double missing)
{
    std::vector<std::string> ids;
    std::vector<std::string> features;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(lang_id(i));
    for (std::size_t f = 0; f < d; ++f) features.push_back("F" + std::to_string(f));
    std::vector<FeatureValue> cells;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < d; ++f) {
            if (f > 0 && gen.unit() < missing) cells.push_back(FeatureValue::Missing);
            else cells.push_back(gen.below(2) == 0 ? FeatureValue::Zero : FeatureValue::One);
        }
    }
    return FeatureMatrix(ids, features, cells);
}

// Distance matrix of points on a line.
inline DistanceMatrix line_matrix(const std::vector<double>& positions, const std::vector<std::string>& ids)
{
    const std::size_t n = positions.size();
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) values[i * n + j] = std::abs(positions[i] - positions[j]);
    }
    return DistanceMatrix(ids, values, DistanceKind::Typological, false);
}

// Euclidean distances of random points in the unit square.
inline DistanceMatrix random_points_matrix(Gen& gen, std::size_t n)
{
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {gen.unit(), gen.unit()};
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(lang_id(i));
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = pts[i].first - pts[j].first;
            const double dy = pts[i].second - pts[j].second;
            values[i * n + j] = values[j * n + i] = std::sqrt(dx * dx + dy * dy);
        }
    }
    return DistanceMatrix(ids, values, DistanceKind::Typological, false);
}

}  // namespace typdiv::testing
