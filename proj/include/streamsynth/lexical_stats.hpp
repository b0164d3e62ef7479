#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace streamsynth {

// Lowercased, split on non-alphanumeric bytes, empties dropped.
std::vector<std::string> tokenize(const std::string& text);

// Mean per-review type-token ratio over non-empty reviews; empty input (or
// all-empty reviews) reports absent.
std::optional<double> richness(const std::vector<std::string>& texts);

struct GroupRichness {
  double mean_ttr = 0.0;
  std::size_t token_count = 0;
  std::size_t review_count = 0;  // non-empty reviews only
};

// Groups with zero non-empty reviews are omitted.
struct RichnessReport {
  std::map<std::string, GroupRichness> groups;
};

RichnessReport richness_report(
    const std::map<std::string, std::vector<std::string>>& grouped_texts);

}  // namespace streamsynth
