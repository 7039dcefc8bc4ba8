#include "typdiv/sampling.hpp"

#include "typdiv/error.hpp"
#include "typdiv/rng.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace typdiv {

std::string_view to_string(Method method)
{
    switch (method) {
    case Method::MaxSum: return "maxsum";
    case Method::MaxMin: return "maxmin";
    case Method::Random: return "random";
    case Method::RandomFamily: return "random_family";
    case Method::RandomGenus: return "random_genus";
    case Method::Convenience: return "convenience";
    case Method::Extension: return "extension";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : {Method::MaxSum, Method::MaxMin, Method::Random, Method::RandomFamily,
                     Method::RandomGenus, Method::Convenience, Method::Extension}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

bool is_seeded(Method method)
{
    return method == Method::Random || method == Method::RandomFamily ||
           method == Method::RandomGenus || method == Method::Convenience;
}

SamplingFrame::SamplingFrame(std::vector<std::string> languages, std::map<std::string, std::string> groups,
                             std::vector<std::pair<std::string, long long>> frequencies)
    : languages_(std::move(languages)), groups_(std::move(groups)), frequencies_(std::move(frequencies))
{
    std::sort(languages_.begin(), languages_.end());
    auto dup = std::adjacent_find(languages_.begin(), languages_.end());
    if (dup != languages_.end()) {
        throw Error(ErrorKind::DuplicateLanguage, "sampling frame: duplicate language '" + *dup + "'");
    }
    for (const auto& [id, label] : groups_) {
        if (!contains(id)) {
            throw Error(ErrorKind::Validation, "sampling frame: grouped language '" + id + "' not in frame");
        }
        if (label.empty()) {
            throw Error(ErrorKind::Validation, "sampling frame: empty group label for '" + id + "'");
        }
    }
    std::set<std::string_view> seen;
    for (const auto& [id, count] : frequencies_) {
        if (!contains(id)) {
            throw Error(ErrorKind::Validation, "sampling frame: frequency-listed language '" + id + "' not in frame");
        }
        if (!seen.insert(id).second) {
            throw Error(ErrorKind::DuplicateLanguage, "sampling frame: '" + id + "' listed twice in frequency list");
        }
        if (count < 0) throw Error(ErrorKind::Validation, "sampling frame: negative count for '" + id + "'");
    }
}

bool SamplingFrame::contains(std::string_view id) const
{
    return std::binary_search(languages_.begin(), languages_.end(), id);
}

namespace {

void require_k(std::size_t k, std::size_t available, std::size_t minimum = 1)
{
    if (k < minimum) {
        throw Error(ErrorKind::Argument, "sample size k must be at least " + std::to_string(minimum) +
                                             ", got " + std::to_string(k));
    }
    if (k > available) {
        throw Error(ErrorKind::Size, "sample size k = " + std::to_string(k) + " exceeds the " +
                                         std::to_string(available) + " available languages");
    }
}

// Greedy core shared by both objectives and by extension. Positions index the
// frame's sorted language list, so a strict `>` scan breaks ties toward the
// lexicographically smallest id.
class Greedy {
public:
    Greedy(const DistanceMatrix& dm, const SamplingFrame& frame, Objective objective)
        : dm_(dm), pool_(dm.indices_of(frame.languages())), objective_(objective),
          score_(pool_.size(), objective == Objective::MaxSum ? 0.0 : std::numeric_limits<double>::infinity()),
          taken_(pool_.size(), false)
    {
    }

    double dist(std::size_t p, std::size_t q) const { return dm_.at(pool_[p], pool_[q]); }

    void add(std::size_t p)
    {
        taken_[p] = true;
        selected_.push_back(p);
        for (std::size_t q = 0; q < pool_.size(); ++q) {
            if (objective_ == Objective::MaxSum) score_[q] += dist(q, p);
            else score_[q] = std::min(score_[q], dist(q, p));
        }
    }

    // Language with the largest total distance to the whole frame.
    std::size_t seed_pick(const std::vector<bool>& eligible) const
    {
        std::size_t best = pool_.size();
        double best_total = -std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < pool_.size(); ++p) {
            if (!eligible[p] || taken_[p]) continue;
            double total = 0.0;
            for (std::size_t q = 0; q < pool_.size(); ++q) total += dist(p, q);
            if (best == pool_.size() || total > best_total) {
                best = p;
                best_total = total;
            }
        }
        return best;
    }

    std::size_t next_pick(const std::vector<bool>& eligible) const
    {
        std::size_t best = pool_.size();
        for (std::size_t p = 0; p < pool_.size(); ++p) {
            if (!eligible[p] || taken_[p]) continue;
            if (best == pool_.size() || score_[p] > score_[best]) best = p;
        }
        return best;
    }

    void run(std::size_t n, const std::vector<bool>& eligible)
    {
        for (std::size_t step = 0; step < n; ++step) {
            add(selected_.empty() ? seed_pick(eligible) : next_pick(eligible));
        }
    }

    const std::vector<std::size_t>& selected() const { return selected_; }

private:
    const DistanceMatrix& dm_;
    std::vector<std::size_t> pool_;
    Objective objective_;
    std::vector<double> score_;
    std::vector<bool> taken_;
    std::vector<std::size_t> selected_;
};

Sample run_greedy(const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k, Objective objective)
{
    Greedy greedy(dm, frame, objective);
    greedy.run(k, std::vector<bool>(frame.size(), true));
    Sample s;
    s.method = objective == Objective::MaxSum ? Method::MaxSum : Method::MaxMin;
    s.k = k;
    for (std::size_t p : greedy.selected()) s.languages.push_back(frame.languages()[p]);
    return s;
}

}  // namespace

Sample sample_maxsum(const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k)
{
    require_k(k, frame.size());
    return run_greedy(dm, frame, k, Objective::MaxSum);
}

Sample sample_maxmin(const DistanceMatrix& dm, const SamplingFrame& frame, std::size_t k)
{
    require_k(k, frame.size(), 2);
    return run_greedy(dm, frame, k, Objective::MaxMin);
}

Sample extend_sample(const DistanceMatrix& dm, const SamplingFrame& frame, std::span<const std::string> base,
                     std::size_t n, Objective objective, std::span<const std::string> candidates)
{
    const auto& langs = frame.languages();
    auto position = [&](const std::string& id, const char* what) {
        auto it = std::lower_bound(langs.begin(), langs.end(), id);
        if (it == langs.end() || *it != id) {
            throw Error(ErrorKind::Coverage, std::string(what) + " language '" + id + "' is not in the sampling frame");
        }
        return static_cast<std::size_t>(it - langs.begin());
    };

    Greedy greedy(dm, frame, objective);
    std::vector<bool> in_base(frame.size(), false);
    for (const auto& id : base) {
        std::size_t p = position(id, "base");
        if (in_base[p]) throw Error(ErrorKind::DuplicateLanguage, "base sample lists '" + id + "' twice");
        in_base[p] = true;
    }

    std::vector<bool> eligible(frame.size(), candidates.empty());
    for (const auto& id : candidates) eligible[position(id, "candidate")] = true;
    std::size_t available = 0;
    for (std::size_t p = 0; p < frame.size(); ++p) {
        if (eligible[p] && !in_base[p]) ++available;
    }
    if (n == 0) throw Error(ErrorKind::Argument, "number of additions must be positive");
    if (n > available) {
        throw Error(ErrorKind::Size, "cannot add " + std::to_string(n) + " languages: only " +
                                         std::to_string(available) + " candidates outside the base");
    }

    for (const auto& id : base) greedy.add(position(id, "base"));
    greedy.run(n, eligible);

    Sample s;
    s.method = Method::Extension;
    s.k = base.size() + n;
    s.base_size = base.size();
    for (std::size_t p : greedy.selected()) s.languages.push_back(langs[p]);
    return s;
}

Sample sample_random(const SamplingFrame& frame, std::size_t k, std::uint64_t seed)
{
    require_k(k, frame.size());
    Rng rng(seed, "random");
    std::vector<std::string> pool = frame.languages();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return Sample{std::move(pool), Method::Random, k, seed, 0};
}

Sample sample_by_group(const SamplingFrame& frame, std::size_t k, std::uint64_t seed, GroupLevel level)
{
    if (!frame.has_grouping()) {
        throw Error(ErrorKind::Config, "group sampling needs family or genus labels");
    }
    require_k(k, frame.size());

    // Unlabelled languages form their own singleton groups.
    std::map<std::string, std::vector<std::string>> members;
    for (const auto& id : frame.languages()) {
        auto it = frame.groups().find(id);
        std::string label = it != frame.groups().end() ? it->second : std::string("\x01") + id;
        members[label].push_back(id);
    }

    Rng rng(seed, level == GroupLevel::Family ? "random_family" : "random_genus");
    Sample s;
    s.method = level == GroupLevel::Family ? Method::RandomFamily : Method::RandomGenus;
    s.k = k;
    s.seed = seed;
    while (s.languages.size() < k) {
        std::vector<std::string> round;
        for (const auto& [label, remaining] : members) {
            if (!remaining.empty()) round.push_back(label);
        }
        rng.shuffle(round);
        for (const auto& label : round) {
            if (s.languages.size() == k) break;
            auto& remaining = members[label];
            auto pick = remaining.begin() + static_cast<std::ptrdiff_t>(rng.below(remaining.size()));
            s.languages.push_back(*pick);
            remaining.erase(pick);
        }
    }
    return s;
}

Sample sample_convenience(const SamplingFrame& frame, std::size_t k, std::uint64_t seed)
{
    if (!frame.has_frequencies()) {
        throw Error(ErrorKind::Config, "convenience sampling needs a frequency list");
    }
    require_k(k, frame.frequencies().size());

    auto ranked = frame.frequencies();
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    const long long cut = ranked[k - 1].second;
    Sample s;
    s.method = Method::Convenience;
    s.k = k;
    s.seed = seed;
    std::vector<std::string> tied;
    for (const auto& [id, count] : ranked) {
        if (count > cut) s.languages.push_back(id);
        else if (count == cut) tied.push_back(id);
    }
    const std::size_t slots = k - s.languages.size();
    if (slots < tied.size()) {
        Rng rng(seed, "convenience");
        rng.shuffle(tied);
    }
    s.languages.insert(s.languages.end(), tied.begin(), tied.begin() + static_cast<std::ptrdiff_t>(slots));
    return s;
}

}  // namespace typdiv
