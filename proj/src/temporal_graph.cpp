#include "streamsynth/temporal_graph.hpp"

#include <algorithm>

namespace streamsynth {

void BipartiteGraph::add_edge(const std::string& user, const std::string& product,
                              std::size_t review_index) {
  user_adj[user].emplace_back(product, review_index);
  product_adj[product].emplace_back(user, review_index);
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, edges] : user_adj) n += edges.size();
  return n;
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace

std::size_t TemporalGraph::span_of(std::int64_t t) const {
  const std::int64_t range = max_ts - min_ts;
  if (range == 0) return 0;
  const auto n = static_cast<std::int64_t>(spans.size());
  std::int64_t idx = (t - min_ts) * n / range;
  if (idx < 0) idx = 0;
  if (idx >= n) idx = n - 1;
  return static_cast<std::size_t>(idx);
}

TemporalGraph build_temporal_graph(const ReviewStream& stream, std::size_t n_spans) {
  if (stream.records.empty()) {
    throw GraphError("EmptyStream: cannot build a temporal graph from zero records");
  }
  if (n_spans < 1) {
    throw GraphError("n_spans must be >= 1");
  }

  TemporalGraph tg;
  auto [min_it, max_it] = std::minmax_element(
      stream.records.begin(), stream.records.end(),
      [](const ReviewRecord& a, const ReviewRecord& b) { return a.timestamp < b.timestamp; });
  tg.min_ts = min_it->timestamp;
  tg.max_ts = max_it->timestamp;
  const std::int64_t range = tg.max_ts - tg.min_ts;
  const auto n = static_cast<std::int64_t>(n_spans);

  tg.spans.resize(n_spans);
  tg.snapshots.resize(n_spans);
  for (std::size_t i = 0; i < n_spans; ++i) {
    SpanWindow& w = tg.spans[i];
    w.index = i;
    const auto k = static_cast<std::int64_t>(i);
    w.start = range == 0 ? tg.min_ts : tg.min_ts + ceil_div(k * range, n);
    if (i + 1 == n_spans) {
      w.end = tg.max_ts;
      w.closed = true;
    } else {
      w.end = range == 0 ? tg.min_ts : tg.min_ts + ceil_div((k + 1) * range, n);
    }
  }

  tg.record_span.resize(stream.records.size());
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const ReviewRecord& r = stream.records[i];
    const std::size_t s = tg.span_of(r.timestamp);
    tg.record_span[i] = s;
    tg.snapshots[s].add_edge(r.user_id, r.product_id, i);
    tg.global.add_edge(r.user_id, r.product_id, i);
  }
  return tg;
}

std::set<std::string> first_order(const BipartiteGraph& g, const std::string& node,
                                  Side side) {
  const auto& adj = side == Side::User ? g.user_adj : g.product_adj;
  std::set<std::string> out;
  auto it = adj.find(node);
  if (it == adj.end()) return out;
  for (const auto& [neighbor, _] : it->second) out.insert(neighbor);
  return out;
}

std::set<std::string> second_order(const BipartiteGraph& g, const std::string& node,
                                   Side side) {
  const Side opposite = side == Side::User ? Side::Product : Side::User;
  std::set<std::string> out;
  for (const std::string& mid : first_order(g, node, side)) {
    for (const std::string& peer : first_order(g, mid, opposite)) {
      out.insert(peer);
    }
  }
  out.erase(node);
  return out;
}

std::set<std::string> third_order(const BipartiteGraph& g, const std::string& node,
                                  Side side) {
  const Side opposite = side == Side::User ? Side::Product : Side::User;
  std::set<std::string> out;
  for (const std::string& peer : second_order(g, node, side)) {
    for (const std::string& far : first_order(g, peer, side)) {
      out.insert(far);
    }
  }
  for (const std::string& near : first_order(g, node, side)) {
    out.erase(near);
  }
  return out;
}

std::set<std::string> second_order_local(const TemporalGraph& tg,
                                         const std::string& user,
                                         std::size_t span_index) {
  return second_order(tg.snapshots.at(span_index), user, Side::User);
}

std::set<std::string> second_order_global(const TemporalGraph& tg,
                                          const std::string& user) {
  return second_order(tg.global, user, Side::User);
}

DatasetStats compute_dataset_stats(const TemporalGraph& tg) {
  DatasetStats s;
  s.total_reviews = tg.global.edge_count();
  s.distinct_users = tg.global.user_adj.size();
  s.distinct_products = tg.global.product_adj.size();
  if (s.distinct_users > 0) {
    s.avg_reviews_per_user =
        static_cast<double>(s.total_reviews) / static_cast<double>(s.distinct_users);
    std::size_t so_sum = 0;
    for (const auto& [user, _] : tg.global.user_adj) {
      so_sum += second_order(tg.global, user, Side::User).size();
    }
    s.avg_second_order_per_user =
        static_cast<double>(so_sum) / static_cast<double>(s.distinct_users);
  }
  if (s.distinct_products > 0) {
    s.avg_reviews_per_product = static_cast<double>(s.total_reviews) /
                                static_cast<double>(s.distinct_products);
  }
  return s;
}

void export_edge_list(const TemporalGraph& tg, const ReviewStream& stream,
                      std::ostream& out) {
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const ReviewRecord& r = stream.records[i];
    out << tg.record_span[i] << '\t' << r.user_id << '\t' << r.product_id << '\t'
        << r.timestamp << '\n';
  }
}

}  // namespace streamsynth
