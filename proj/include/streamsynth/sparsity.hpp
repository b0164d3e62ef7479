#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streamsynth/temporal_graph.hpp"

namespace streamsynth {

enum class Category { Normal, MidTail, LongTail, Extreme };

const char* category_name(Category c);
Category category_from_name(const std::string& name);

// Per-user activity statistics over the user's active calendar days (UTC).
struct UserActivityStats {
  std::string user_id;
  std::size_t review_count = 0;
  std::map<std::int64_t, std::size_t> daily_counts;  // epoch day -> count
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t second_order_degree = 0;  // |second_order_global(u)|
};

struct SparsityAssignment {
  std::string user_id;
  Category category = Category::Normal;
  UserActivityStats stats;
};

struct SparsityConfig {
  std::size_t dense_threshold = 5;  // review_count > threshold => dense pool
  std::size_t so_threshold = 10;    // second-order degree for LongTail vs Extreme
  std::uint64_t seed = 0;
};

// One entry per distinct user, sorted by user_id.
std::vector<UserActivityStats> compute_activity_stats(const ReviewStream& stream,
                                                      const TemporalGraph& tg);

// Lloyd's algorithm, k = 2, on per-dimension standardized points.
// Deterministic: initial centroids are the two standardized points farthest
// apart (ties by lowest index); runs to an assignment fixpoint or 100
// iterations; an empty cluster is re-seeded with the point farthest from its
// centroid. Identical points all land in cluster 0.
std::vector<int> kmeans_two(const std::vector<std::array<double, 4>>& points,
                            std::uint64_t seed);

// Two-stage split: dense users (review_count > dense_threshold) are clustered
// on (mean, std, min, max) of daily counts; the cluster whose centroid has the
// higher daily-count std becomes MidTail, the other Normal. Sparse users with
// second_order_degree >= so_threshold are LongTail, the rest Extreme.
std::vector<SparsityAssignment> classify_users(const ReviewStream& stream,
                                               const TemporalGraph& tg,
                                               const SparsityConfig& cfg);

}  // namespace streamsynth
