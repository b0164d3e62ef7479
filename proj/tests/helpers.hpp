#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "streamsynth/ingest.hpp"
#include "streamsynth/rng.hpp"

namespace streamsynth::testing {

// Brute-force neighborhood oracles over a raw (user, product) edge list.
// These deliberately share no code with BipartiteGraph.
using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline std::set<std::string> oracle_first_user(const EdgeList& edges,
                                               const std::string& user) {
  std::set<std::string> out;
  for (const auto& [u, p] : edges)
    if (u == user) out.insert(p);
  return out;
}

inline std::set<std::string> oracle_first_product(const EdgeList& edges,
                                                  const std::string& product) {
  std::set<std::string> out;
  for (const auto& [u, p] : edges)
    if (p == product) out.insert(u);
  return out;
}

inline std::set<std::string> oracle_second_user(const EdgeList& edges,
                                                const std::string& user) {
  std::set<std::string> out;
  for (const std::string& p : oracle_first_user(edges, user))
    for (const std::string& peer : oracle_first_product(edges, p)) out.insert(peer);
  out.erase(user);
  return out;
}

inline std::set<std::string> oracle_second_product(const EdgeList& edges,
                                                   const std::string& product) {
  std::set<std::string> out;
  for (const std::string& u : oracle_first_product(edges, product))
    for (const std::string& peer : oracle_first_user(edges, u)) out.insert(peer);
  out.erase(product);
  return out;
}

inline std::set<std::string> oracle_third_user(const EdgeList& edges,
                                               const std::string& user) {
  std::set<std::string> out;
  for (const std::string& peer : oracle_second_user(edges, user))
    for (const std::string& p : oracle_first_user(edges, peer)) out.insert(p);
  for (const std::string& p : oracle_first_user(edges, user)) out.erase(p);
  return out;
}

// Random stream fixture used by several suites.
inline ReviewStream random_stream(SplitMix64& rng, std::size_t n_records,
                                  std::size_t n_users, std::size_t n_products,
                                  std::int64_t max_ts = 1000000) {
  ReviewStream s;
  s.dataset_name = "random";
  for (std::size_t i = 0; i < n_records; ++i) {
    ReviewRecord r;
    r.user_id = "u" + std::to_string(rng.bounded(n_users));
    r.product_id = "p" + std::to_string(rng.bounded(n_products));
    r.timestamp = static_cast<std::int64_t>(rng.bounded(max_ts));
    r.rating = 1 + static_cast<int>(rng.bounded(5));
    r.text = "text " + std::to_string(rng.bounded(1000));
    s.records.push_back(std::move(r));
  }
  sort_stream(s.records);
  return s;
}

}  // namespace streamsynth::testing
