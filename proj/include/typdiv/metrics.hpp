#pragma once

#include "typdiv/distance.hpp"
#include "typdiv/frame.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace typdiv {

// Mean distance over ordered pairs of distinct sample languages.
double mpd(std::span<const std::string> sample, const DistanceMatrix& dm);

enum class OverlapDenominator {
    AllFeatures,     // divide by d
    SharedCoverage,  // divide by the number of features covered in both
};

// Features on which both languages are covered and agree, over the
// denominator. A pair with no shared coverage scores 0 under SharedCoverage.
double pairwise_overlap(const FeatureMatrix& matrix, std::size_t a, std::size_t b,
                        OverlapDenominator denominator = OverlapDenominator::AllFeatures);

double fvo(std::span<const std::string> sample, const FeatureMatrix& matrix,
           OverlapDenominator denominator = OverlapDenominator::AllFeatures);

// Mean over features of (distinct covered values in the sample) / 2.
double fvi(std::span<const std::string> sample, const FeatureMatrix& matrix);

// Binary Shannon entropy (bits) of one column given its value counts.
double feature_entropy(std::size_t zeros, std::size_t ones);

// Mean per-feature entropy; uncovered features contribute 0.
double entropy(std::span<const std::string> sample, const FeatureMatrix& matrix);

struct DiversityReport {
    double mpd = 0.0;
    double fvo = 0.0;
    double fvi = 0.0;
    double entropy = 0.0;
    std::size_t sample_size = 0;
    std::size_t d = 0;
    bool normalized_distances = false;
};

DiversityReport diversity_report(std::span<const std::string> sample, const DistanceMatrix& dm,
                                 const FeatureMatrix& matrix);

struct FamilyCoherenceRow {
    std::string family;
    std::size_t n_languages = 0;
    double mean_pairwise_overlap = 0.0;
};

// Families with at least two languages, largest first (ties by name).
std::vector<FamilyCoherenceRow> family_coherence(const FeatureMatrix& matrix, const LanguageTable& records);

// Share of languages whose nearest neighbour (ties to the smallest id) lies
// in a different family. Unlabelled languages count as their own family.
double nearest_neighbor_family_rate(const DistanceMatrix& dm, const LanguageTable& records);

struct ScoreStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
    double min = 0.0;
    double max = 0.0;
};

struct ScoreSummary {
    ScoreStats sample;
    ScoreStats population;
    std::vector<std::string> uncovered;
};

ScoreSummary evaluate_sample_scores(std::span<const std::string> sample,
                                    std::span<const std::pair<std::string, double>> scores);

}  // namespace typdiv
