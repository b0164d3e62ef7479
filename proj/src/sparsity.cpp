#include "streamsynth/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamsynth {

const char* category_name(Category c) {
  switch (c) {
    case Category::Normal: return "Normal";
    case Category::MidTail: return "MidTail";
    case Category::LongTail: return "LongTail";
    case Category::Extreme: return "Extreme";
  }
  return "?";
}

Category category_from_name(const std::string& name) {
  if (name == "Normal") return Category::Normal;
  if (name == "MidTail") return Category::MidTail;
  if (name == "LongTail") return Category::LongTail;
  if (name == "Extreme") return Category::Extreme;
  throw std::invalid_argument("unknown category: " + name);
}

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t epoch_day(std::int64_t ts) {
  // timestamps are >= 0, plain division is a floor
  return ts / kSecondsPerDay;
}

double sq_dist(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

}  // namespace

std::vector<UserActivityStats> compute_activity_stats(const ReviewStream& stream,
                                                      const TemporalGraph& tg) {
  std::map<std::string, UserActivityStats> by_user;
  for (const ReviewRecord& r : stream.records) {
    UserActivityStats& s = by_user[r.user_id];
    s.user_id = r.user_id;
    ++s.review_count;
    ++s.daily_counts[epoch_day(r.timestamp)];
  }

  std::vector<UserActivityStats> out;
  out.reserve(by_user.size());
  for (auto& [user, s] : by_user) {
    double sum = 0.0, sum_sq = 0.0;
    s.min = std::numeric_limits<double>::max();
    s.max = 0.0;
    for (const auto& [_, c] : s.daily_counts) {
      const auto v = static_cast<double>(c);
      sum += v;
      sum_sq += v * v;
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    const auto days = static_cast<double>(s.daily_counts.size());
    s.mean = sum / days;
    s.stddev = std::sqrt(std::max(0.0, sum_sq / days - s.mean * s.mean));
    s.second_order_degree = second_order_global(tg, user).size();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> kmeans_two(const std::vector<std::array<double, 4>>& points,
                            std::uint64_t /*seed*/) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  if (n == 1) return {0};

  // Standardize per dimension; constant dimensions stay at zero.
  std::array<double, 4> mean{}, var{};
  for (const auto& p : points)
    for (std::size_t d = 0; d < 4; ++d) mean[d] += p[d];
  for (std::size_t d = 0; d < 4; ++d) mean[d] /= static_cast<double>(n);
  for (const auto& p : points)
    for (std::size_t d = 0; d < 4; ++d) var[d] += (p[d] - mean[d]) * (p[d] - mean[d]);
  std::vector<std::array<double, 4>> z(n);
  for (std::size_t d = 0; d < 4; ++d) var[d] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < 4; ++d)
      z[i][d] = var[d] > 0.0 ? (points[i][d] - mean[d]) / std::sqrt(var[d]) : 0.0;

  // Initial centroids: the farthest pair, ties by lowest index.
  std::size_t a = 0, b = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = sq_dist(z[i], z[j]);
      if (d > best) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  if (best <= 0.0) return std::vector<int>(n, 0);  // all points identical

  std::array<std::array<double, 4>, 2> centroid = {z[a], z[b]};
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<int> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = sq_dist(z[i], centroid[1]) < sq_dist(z[i], centroid[0]) ? 1 : 0;
    }
    // Re-seed an empty cluster with the point farthest from its centroid.
    for (int c = 0; c < 2; ++c) {
      if (std::count(next.begin(), next.end(), c) == 0) {
        std::size_t far = 0;
        double far_d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = sq_dist(z[i], centroid[next[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far_d > 0.0) next[far] = c;
      }
    }
    if (next == assign && iter > 0) break;
    assign = next;
    std::array<std::array<double, 4>, 2> sum{};
    std::array<std::size_t, 2> cnt{};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < 4; ++d) sum[assign[i]][d] += z[i][d];
      ++cnt[assign[i]];
    }
    for (int c = 0; c < 2; ++c) {
      if (cnt[c] == 0) continue;
      for (std::size_t d = 0; d < 4; ++d)
        centroid[c][d] = sum[c][d] / static_cast<double>(cnt[c]);
    }
  }
  return assign;
}

std::vector<SparsityAssignment> classify_users(const ReviewStream& stream,
                                               const TemporalGraph& tg,
                                               const SparsityConfig& cfg) {
  std::vector<UserActivityStats> stats = compute_activity_stats(stream, tg);

  std::vector<std::size_t> dense_idx;
  std::vector<SparsityAssignment> out(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) {
    out[i].user_id = stats[i].user_id;
    out[i].stats = stats[i];
    if (stats[i].review_count > cfg.dense_threshold) {
      dense_idx.push_back(i);
    } else {
      out[i].category = stats[i].second_order_degree >= cfg.so_threshold
                            ? Category::LongTail
                            : Category::Extreme;
    }
  }

  if (!dense_idx.empty()) {
    std::vector<std::array<double, 4>> pts;
    pts.reserve(dense_idx.size());
    for (std::size_t i : dense_idx) {
      const UserActivityStats& s = stats[i];
      pts.push_back({s.mean, s.stddev, s.min, s.max});
    }
    const std::vector<int> labels = kmeans_two(pts, cfg.seed);

    // The cluster with the higher raw daily-count std is MidTail.
    std::array<double, 2> std_sum{};
    std::array<std::size_t, 2> cnt{};
    for (std::size_t k = 0; k < pts.size(); ++k) {
      std_sum[labels[k]] += pts[k][1];
      ++cnt[labels[k]];
    }
    int midtail_cluster = -1;
    if (cnt[0] > 0 && cnt[1] > 0) {
      const double std0 = std_sum[0] / static_cast<double>(cnt[0]);
      const double std1 = std_sum[1] / static_cast<double>(cnt[1]);
      if (std0 != std1) midtail_cluster = std1 > std0 ? 1 : 0;
    }
    for (std::size_t k = 0; k < dense_idx.size(); ++k) {
      out[dense_idx[k]].category =
          labels[k] == midtail_cluster ? Category::MidTail : Category::Normal;
    }
  }
  return out;
}

}  // namespace streamsynth
