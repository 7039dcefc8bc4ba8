#include "typdiv/metrics.hpp"

#include "typdiv/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace typdiv {

namespace {

std::vector<std::size_t> sample_rows(std::span<const std::string> sample, const FeatureMatrix& matrix,
                                     std::size_t minimum)
{
    if (sample.size() < minimum) {
        throw Error(ErrorKind::Argument, "metric needs a sample of at least " + std::to_string(minimum) +
                                             " language(s), got " + std::to_string(sample.size()));
    }
    if (matrix.dimension() == 0) throw Error(ErrorKind::Argument, "feature matrix has no features");
    std::vector<std::size_t> rows;
    std::set<std::string_view> seen;
    std::string missing;
    for (const auto& id : sample) {
        if (!seen.insert(id).second) throw Error(ErrorKind::Argument, "sample lists '" + id + "' twice");
        if (auto r = matrix.language_index(id)) rows.push_back(*r);
        else missing += (missing.empty() ? "" : ", ") + id;
    }
    if (!missing.empty()) {
        throw Error(ErrorKind::Coverage, "sample languages absent from the feature matrix: " + missing);
    }
    return rows;
}

}  // namespace

double mpd(std::span<const std::string> sample, const DistanceMatrix& dm)
{
    if (sample.size() < 2) {
        throw Error(ErrorKind::Argument, "MPD needs at least two languages, got " + std::to_string(sample.size()));
    }
    if (std::set<std::string_view>(sample.begin(), sample.end()).size() != sample.size()) {
        throw Error(ErrorKind::Argument, "sample contains duplicate languages");
    }
    const std::vector<std::size_t> idx = dm.indices_of(sample);
    double total = 0.0;
    for (std::size_t a : idx) {
        for (std::size_t b : idx) {
            if (a != b) total += dm.at(a, b);
        }
    }
    const double n = static_cast<double>(idx.size());
    return total / (n * (n - 1.0));
}

double pairwise_overlap(const FeatureMatrix& matrix, std::size_t a, std::size_t b, OverlapDenominator denominator)
{
    std::size_t agree = 0;
    std::size_t shared = 0;
    for (std::size_t f = 0; f < matrix.dimension(); ++f) {
        const FeatureValue va = matrix.value(a, f);
        const FeatureValue vb = matrix.value(b, f);
        if (va == FeatureValue::Missing || vb == FeatureValue::Missing) continue;
        ++shared;
        if (va == vb) ++agree;
    }
    const std::size_t denom = denominator == OverlapDenominator::AllFeatures ? matrix.dimension() : shared;
    if (denom == 0) return 0.0;
    return static_cast<double>(agree) / static_cast<double>(denom);
}

double fvo(std::span<const std::string> sample, const FeatureMatrix& matrix, OverlapDenominator denominator)
{
    const std::vector<std::size_t> rows = sample_rows(sample, matrix, 2);
    double total = 0.0;
    for (std::size_t a : rows) {
        for (std::size_t b : rows) {
            if (a != b) total += pairwise_overlap(matrix, a, b, denominator);
        }
    }
    const double n = static_cast<double>(rows.size());
    return total / (n * (n - 1.0));
}

double fvi(std::span<const std::string> sample, const FeatureMatrix& matrix)
{
    const std::vector<std::size_t> rows = sample_rows(sample, matrix, 1);
    double total = 0.0;
    for (std::size_t f = 0; f < matrix.dimension(); ++f) {
        bool has_zero = false;
        bool has_one = false;
        for (std::size_t r : rows) {
            const FeatureValue v = matrix.value(r, f);
            has_zero |= v == FeatureValue::Zero;
            has_one |= v == FeatureValue::One;
        }
        total += (static_cast<double>(has_zero) + static_cast<double>(has_one)) / 2.0;
    }
    return total / static_cast<double>(matrix.dimension());
}

double feature_entropy(std::size_t zeros, std::size_t ones)
{
    const std::size_t covered = zeros + ones;
    if (covered == 0) return 0.0;
    double h = 0.0;
    for (std::size_t count : {zeros, ones}) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(covered);
        h -= p * std::log2(p);
    }
    return h;
}

double entropy(std::span<const std::string> sample, const FeatureMatrix& matrix)
{
    const std::vector<std::size_t> rows = sample_rows(sample, matrix, 1);
    double total = 0.0;
    for (std::size_t f = 0; f < matrix.dimension(); ++f) {
        std::size_t zeros = 0;
        std::size_t ones = 0;
        for (std::size_t r : rows) {
            const FeatureValue v = matrix.value(r, f);
            zeros += v == FeatureValue::Zero;
            ones += v == FeatureValue::One;
        }
        total += feature_entropy(zeros, ones);
    }
    return total / static_cast<double>(matrix.dimension());
}

DiversityReport diversity_report(std::span<const std::string> sample, const DistanceMatrix& dm,
                                 const FeatureMatrix& matrix)
{
    DiversityReport r;
    r.mpd = mpd(sample, dm);
    r.fvo = fvo(sample, matrix);
    r.fvi = fvi(sample, matrix);
    r.entropy = entropy(sample, matrix);
    r.sample_size = sample.size();
    r.d = matrix.dimension();
    r.normalized_distances = dm.normalized();
    return r;
}

std::vector<FamilyCoherenceRow> family_coherence(const FeatureMatrix& matrix, const LanguageTable& records)
{
    std::map<std::string, std::vector<std::size_t>> families;
    for (std::size_t r = 0; r < matrix.num_languages(); ++r) {
        const LanguageRecord* rec = records.find(matrix.language_ids()[r]);
        if (rec != nullptr && rec->family) families[*rec->family].push_back(r);
    }

    std::vector<FamilyCoherenceRow> out;
    for (const auto& [family, rows] : families) {
        if (rows.size() < 2) continue;
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                total += pairwise_overlap(matrix, rows[i], rows[j]);
                ++pairs;
            }
        }
        out.push_back({family, rows.size(), total / static_cast<double>(pairs)});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n_languages > b.n_languages; });
    return out;
}

double nearest_neighbor_family_rate(const DistanceMatrix& dm, const LanguageTable& records)
{
    const std::size_t n = dm.size();
    if (n < 2) throw Error(ErrorKind::Argument, "nearest-neighbour rate needs at least two languages");

    std::vector<std::string> family(n);
    bool any_label = false;
    for (std::size_t i = 0; i < n; ++i) {
        const LanguageRecord* rec = records.find(dm.language_ids()[i]);
        if (rec != nullptr && rec->family) {
            family[i] = *rec->family;
            any_label = true;
        } else {
            family[i] = "\x01" + dm.language_ids()[i];
        }
    }
    if (!any_label) throw Error(ErrorKind::Config, "no family labels available for the frame languages");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return dm.language_ids()[a] < dm.language_ids()[b]; });

    std::size_t cross = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t nearest = n;
        for (std::size_t j : order) {
            if (j == i) continue;
            if (nearest == n || dm.at(i, j) < dm.at(i, nearest)) nearest = j;
        }
        if (family[nearest] != family[i]) ++cross;
    }
    return static_cast<double>(cross) / static_cast<double>(n);
}

namespace {

ScoreStats stats_of(const std::vector<double>& values)
{
    ScoreStats s;
    s.n = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(s.n));
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

}  // namespace

ScoreSummary evaluate_sample_scores(std::span<const std::string> sample,
                                    std::span<const std::pair<std::string, double>> scores)
{
    std::map<std::string_view, double> by_id;
    std::vector<double> population;
    for (const auto& [id, score] : scores) {
        if (!by_id.emplace(id, score).second) {
            throw Error(ErrorKind::DuplicateLanguage, "score table lists '" + id + "' twice");
        }
        population.push_back(score);
    }

    ScoreSummary summary;
    std::vector<double> covered;
    for (const auto& id : sample) {
        auto it = by_id.find(id);
        if (it == by_id.end()) summary.uncovered.push_back(id);
        else covered.push_back(it->second);
    }
    if (covered.empty()) throw Error(ErrorKind::Coverage, "no sample language has a score");
    summary.sample = stats_of(covered);
    summary.population = stats_of(population);
    return summary;
}

}  // namespace typdiv
