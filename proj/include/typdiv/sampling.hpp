#pragma once

#include "typdiv/distance.hpp"
#include "typdiv/frame.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace typdiv {

enum class Method { MaxSum, MaxMin, Random, RandomFamily, RandomGenus, Convenience, Extension };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
// Random, RandomFamily, RandomGenus and Convenience consume a seed.
bool is_seeded(Method method);

enum class Objective { MaxSum, MaxMin };

// The candidate set, kept sorted by id, with optional group labels and
// usage counts for the baselines.
class SamplingFrame {
public:
    SamplingFrame() = default;
    explicit SamplingFrame(std::vector<std::string> languages,
                           std::map<std::string, std::string> groups = {},
                           std::vector<std::pair<std::string, long long>> frequencies = {});

    const std::vector<std::string>& languages() const noexcept { return languages_; }
    std::size_t size() const noexcept { return languages_.size(); }
    bool contains(std::string_view id) const;

    const std::map<std::string, std::string>& groups() const noexcept { return groups_; }
    bool has_grouping() const noexcept { return !groups_.empty(); }
    const std::vector<std::pair<std::string, long long>>& frequencies() const noexcept { return frequencies_; }
    bool has_frequencies() const noexcept { return !frequencies_.empty(); }

private:
    std::vector<std::string> languages_;
    std::map<std::string, std::string> groups_;
    std::vector<std::pair<std::string, long long>> frequencies_;
};

struct Sample {
    std::vector<std::string> languages;  // selection order
    Method method = Method::MaxSum;
    std::size_t k = 0;
    std::optional<std::uint64_t> seed;
    std::size_t base_size = 0;  // languages[base_size..] were added by extend_sample

    bool operator==(const Sample&) const = default;
};

Sample sample_maxsum(const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k);
Sample sample_maxmin(const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k);

Sample sample_random(const SamplingFrame& frame, std::size_t k, std::uint64_t seed);

enum class GroupLevel { Family, Genus };

// One language per group per round; groups drawn without replacement within a
// round, exhausted groups skipped.
Sample sample_by_group(const SamplingFrame& frame, std::size_t k, std::uint64_t seed,
                       GroupLevel level = GroupLevel::Family);

// Most frequent first; a tie straddling the cut is resolved by the seed.
Sample sample_convenience(const SamplingFrame& frame, std::size_t k, std::uint64_t seed);

// Continues the greedy from `base` for `n` picks. Additions are drawn from
// `candidates` when given (each must be in the frame), else from the frame.
Sample extend_sample(const DistanceMatrix& dm, const SamplingFrame& frame,
                     std::span<const std::string> base, std::size_t n, Objective objective,
                     std::span<const std::string> candidates = {});

}  // namespace typdiv
