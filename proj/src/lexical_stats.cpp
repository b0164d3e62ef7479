#include "streamsynth/lexical_stats.hpp"

#include <cctype>
#include <set>

namespace streamsynth {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::optional<double> richness(const std::vector<std::string>& texts) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (const std::string& t : texts) {
    const std::vector<std::string> tokens = tokenize(t);
    if (tokens.empty()) continue;
    const std::set<std::string> distinct(tokens.begin(), tokens.end());
    sum += static_cast<double>(distinct.size()) / static_cast<double>(tokens.size());
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return sum / static_cast<double>(counted);
}

RichnessReport richness_report(
    const std::map<std::string, std::vector<std::string>>& grouped_texts) {
  RichnessReport report;
  for (const auto& [group, texts] : grouped_texts) {
    const auto mean = richness(texts);
    if (!mean) continue;
    GroupRichness g;
    g.mean_ttr = *mean;
    for (const std::string& t : texts) {
      const auto tokens = tokenize(t);
      g.token_count += tokens.size();
      if (!tokens.empty()) ++g.review_count;
    }
    report.groups[group] = g;
  }
  return report;
}

}  // namespace streamsynth
