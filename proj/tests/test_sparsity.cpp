#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "streamsynth/sparsity.hpp"

using namespace streamsynth;
using namespace streamsynth::testing;

namespace {

constexpr std::int64_t kDay = 86400;

// Exhaustive best 2-partition by within-cluster SSE on standardized points.
// Independent of kmeans_two; only valid for small n.
double partition_sse(const std::vector<std::array<double, 4>>& z,
                     const std::vector<int>& assign) {
  double total = 0.0;
  for (int c = 0; c < 2; ++c) {
    std::array<double, 4> centroid{};
    std::size_t count = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (assign[i] != c) continue;
      for (std::size_t d = 0; d < 4; ++d) centroid[d] += z[i][d];
      ++count;
    }
    if (count == 0) continue;
    for (std::size_t d = 0; d < 4; ++d) centroid[d] /= static_cast<double>(count);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (assign[i] != c) continue;
      for (std::size_t d = 0; d < 4; ++d) {
        const double x = z[i][d] - centroid[d];
        total += x * x;
      }
    }
  }
  return total;
}

std::vector<std::array<double, 4>> standardize(
    const std::vector<std::array<double, 4>>& pts) {
  const std::size_t n = pts.size();
  std::array<double, 4> mean{}, var{};
  for (const auto& p : pts)
    for (std::size_t d = 0; d < 4; ++d) mean[d] += p[d] / static_cast<double>(n);
  for (const auto& p : pts)
    for (std::size_t d = 0; d < 4; ++d)
      var[d] += (p[d] - mean[d]) * (p[d] - mean[d]) / static_cast<double>(n);
  std::vector<std::array<double, 4>> z(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < 4; ++d)
      z[i][d] = var[d] > 0 ? (pts[i][d] - mean[d]) / std::sqrt(var[d]) : 0.0;
  return z;
}

double best_sse_exhaustive(const std::vector<std::array<double, 4>>& pts) {
  const auto z = standardize(pts);
  const std::size_t n = z.size();
  double best = 1e300;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = (mask >> i) & 1;
    best = std::min(best, partition_sse(z, assign));
  }
  return best;
}

}  // namespace

TEST_CASE("activity stats on hand-checked users") {
  ReviewStream s;
  // two reviews on each of two consecutive days
  for (int i = 0; i < 2; ++i) s.records.push_back({"a", "p", 10 * kDay + i, 5, ""});
  for (int i = 0; i < 2; ++i) s.records.push_back({"a", "p", 11 * kDay + i, 5, ""});
  s.records.push_back({"b", "p", 10 * kDay, 5, ""});
  sort_stream(s.records);
  const TemporalGraph tg = build_temporal_graph(s, 2);
  const auto stats = compute_activity_stats(s, tg);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].user_id == "a");
  CHECK(stats[0].review_count == 4);
  CHECK(stats[0].mean == doctest::Approx(2.0));
  CHECK(stats[0].stddev == doctest::Approx(0.0));
  CHECK(stats[0].min == 2);
  CHECK(stats[0].max == 2);
  CHECK(stats[1].user_id == "b");
  CHECK(stats[1].mean == 1);
  CHECK(stats[1].min == 1);
  CHECK(stats[1].max == 1);
  CHECK(stats[1].stddev == 0);
}

TEST_CASE("activity stats match a recount oracle on random streams") {
  SplitMix64 rng(41);
  const ReviewStream s = random_stream(rng, 150, 15, 10, 40 * kDay);
  const TemporalGraph tg = build_temporal_graph(s, 4);
  const auto stats = compute_activity_stats(s, tg);

  std::map<std::string, std::map<std::int64_t, std::size_t>> recount;
  for (const auto& r : s.records) ++recount[r.user_id][r.timestamp / kDay];
  REQUIRE(stats.size() == recount.size());
  for (const auto& st : stats) {
    const auto& days = recount.at(st.user_id);
    CHECK(st.daily_counts == days);
    std::size_t total = 0;
    double mn = 1e18, mx = 0, sum = 0;
    for (const auto& [_, c] : days) {
      total += c;
      mn = std::min(mn, double(c));
      mx = std::max(mx, double(c));
      sum += double(c);
    }
    CHECK(st.review_count == total);
    CHECK(st.mean == doctest::Approx(sum / double(days.size())));
    CHECK(st.min == mn);
    CHECK(st.max == mx);
    CHECK(st.min <= st.mean);
    CHECK(st.mean <= st.max);
    CHECK(st.second_order_degree == second_order_global(tg, st.user_id).size());
  }
}

TEST_CASE("kmeans_two separates two well-separated clouds exactly") {
  std::vector<std::array<double, 4>> pts;
  SplitMix64 rng(43);
  for (int i = 0; i < 4; ++i)
    pts.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01()});
  for (int i = 0; i < 4; ++i)
    pts.push_back({50 + rng.uniform01(), 50 + rng.uniform01(), 50 + rng.uniform01(),
                   50 + rng.uniform01()});
  const auto assign = kmeans_two(pts, 0);
  CHECK(assign[0] == assign[1]);
  CHECK(assign[1] == assign[2]);
  CHECK(assign[2] == assign[3]);
  CHECK(assign[4] == assign[5]);
  CHECK(assign[5] == assign[6]);
  CHECK(assign[6] == assign[7]);
  CHECK(assign[0] != assign[4]);

  const auto z = standardize(pts);
  CHECK(partition_sse(z, assign) == doctest::Approx(best_sse_exhaustive(pts)));
}

TEST_CASE("identical points all land in cluster 0") {
  std::vector<std::array<double, 4>> pts(6, {1.0, 2.0, 3.0, 4.0});
  const auto assign = kmeans_two(pts, 0);
  CHECK(std::all_of(assign.begin(), assign.end(), [](int a) { return a == 0; }));
}

TEST_CASE("kmeans_two is invariant under translation") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.bounded(7);
    std::vector<std::array<double, 4>> pts(n), shifted(n);
    const std::array<double, 4> offset = {5.0, -3.0, 100.0, 0.25};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < 4; ++d) {
        pts[i][d] = rng.uniform01() * 10;
        shifted[i][d] = pts[i][d] + offset[d];
      }
    }
    CHECK(kmeans_two(pts, 0) == kmeans_two(shifted, 0));
  }
}

TEST_CASE("forced classification: one review, no neighbors => Extreme") {
  ReviewStream s;
  s.records.push_back({"loner", "own_product", 0, 5, ""});
  s.records.push_back({"other", "different", 100, 5, ""});
  const TemporalGraph tg = build_temporal_graph(s, 2);
  const auto assignments = classify_users(s, tg, {});
  for (const auto& a : assignments) CHECK(a.category == Category::Extreme);
}

TEST_CASE("classification partitions users and respects stage-1 thresholds") {
  SplitMix64 rng(53);
  const ReviewStream s = random_stream(rng, 300, 30, 12, 40 * kDay);
  const TemporalGraph tg = build_temporal_graph(s, 5);
  SparsityConfig cfg;
  const auto assignments = classify_users(s, tg, cfg);

  std::set<std::string> seen;
  for (const auto& a : assignments) {
    CHECK(seen.insert(a.user_id).second);
    if (a.category == Category::MidTail) {
      CHECK(a.stats.review_count > cfg.dense_threshold);
    }
    if (a.category == Category::LongTail || a.category == Category::Extreme) {
      CHECK(a.stats.review_count <= cfg.dense_threshold);
    }
    if (a.category == Category::LongTail) {
      CHECK(a.stats.second_order_degree >= cfg.so_threshold);
    }
    if (a.category == Category::Extreme) {
      CHECK(a.stats.second_order_degree < cfg.so_threshold);
    }
  }
  CHECK(seen.size() == tg.global.user_adj.size());

  // deterministic
  const auto again = classify_users(s, tg, cfg);
  REQUIRE(again.size() == assignments.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].category == assignments[i].category);
  }
}

TEST_CASE("midtail selection keys off the higher-std centroid, not the label") {
  // Dense users: a stable block and a bursty block. Whichever cluster index
  // kmeans gives them, the bursty block must be MidTail.
  ReviewStream s;
  for (int u = 0; u < 3; ++u) {
    // stable: one review a day for 8 days
    for (int d = 0; d < 8; ++d) {
      s.records.push_back({"stable" + std::to_string(u), "p", d * kDay, 5, ""});
    }
  }
  for (int u = 0; u < 3; ++u) {
    // bursty: 7 reviews one day, one a month later
    for (int i = 0; i < 7; ++i) {
      s.records.push_back({"burst" + std::to_string(u), "p", 2 * kDay + i, 5, ""});
    }
    s.records.push_back({"burst" + std::to_string(u), "p", 40 * kDay, 5, ""});
  }
  sort_stream(s.records);
  const TemporalGraph tg = build_temporal_graph(s, 4);
  for (const auto& a : classify_users(s, tg, {})) {
    if (a.user_id.starts_with("burst")) CHECK(a.category == Category::MidTail);
    if (a.user_id.starts_with("stable")) CHECK(a.category == Category::Normal);
  }
}
