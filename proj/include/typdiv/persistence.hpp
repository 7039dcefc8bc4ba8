#pragma once

#include "typdiv/distance.hpp"
#include "typdiv/sampling.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace typdiv {

// `key=value` pairs written as `# key=value` header lines.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// printf("%.*g") with the C locale.
std::string format_double(double value, int significant_digits = 17);
// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

void write_provenance(std::ostream& out, const Provenance& provenance);

// Full symmetric form with `# kind=` / `# normalized=` headers; 17
// significant digits so values round-trip exactly.
void save_distance_matrix(std::ostream& out, const DistanceMatrix& dm, const Provenance& extra = {});
DistanceMatrix parse_distance_matrix(std::istream& in, const std::string& source);
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

// One id per line after a provenance block; additions of an extended sample
// are recorded through `# base_size=`.
void save_sample(std::ostream& out, const Sample& sample, const Provenance& extra = {});
Sample parse_sample(std::istream& in, const std::string& source);
Sample load_sample(const std::filesystem::path& path);

// Plain list of ids (one per line, `#` comments allowed); used for wishlists.
std::vector<std::string> load_id_list(const std::filesystem::path& path);

std::vector<std::pair<std::string, long long>> load_frequency_list(const std::filesystem::path& path);
std::vector<std::pair<std::string, double>> load_score_table(const std::filesystem::path& path);

}  // namespace typdiv
