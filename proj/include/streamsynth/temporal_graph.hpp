#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "streamsynth/ingest.hpp"

namespace streamsynth {

enum class Side { User, Product };

// User <-> product adjacency with per-edge review indices into the stream
// that built the graph. Edges are kept as multisets: one entry per review.
struct BipartiteGraph {
  // id -> list of (opposite-side id, review index), insertion order.
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> user_adj;
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> product_adj;

  void add_edge(const std::string& user, const std::string& product,
                std::size_t review_index);
  std::size_t edge_count() const;
};

struct SpanWindow {
  std::size_t index = 0;
  std::int64_t start = 0;  // inclusive
  std::int64_t end = 0;    // exclusive, except closed windows (the last span)
  bool closed = false;

  bool contains(std::int64_t t) const {
    return t >= start && (closed ? t <= end : t < end);
  }
};

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DTDG: per-span snapshots plus the cumulative global graph.
struct TemporalGraph {
  std::vector<SpanWindow> spans;
  std::vector<BipartiteGraph> snapshots;
  BipartiteGraph global;
  std::int64_t min_ts = 0;
  std::int64_t max_ts = 0;
  std::vector<std::size_t> record_span;  // span index per stream record

  std::size_t n_spans() const { return spans.size(); }
  std::size_t span_of(std::int64_t t) const;
};

// Splits [min_ts, max_ts] into n_spans equal-width windows and buckets every
// record; the last window is right-inclusive so the max-timestamp records are
// kept. Throws EmptyStream (GraphError) on an empty stream.
TemporalGraph build_temporal_graph(const ReviewStream& stream, std::size_t n_spans);

// Distinct opposite-side neighbors. An absent node yields the empty set.
std::set<std::string> first_order(const BipartiteGraph& g, const std::string& node,
                                  Side side);
// Distinct same-side nodes two hops away, excluding the node itself.
std::set<std::string> second_order(const BipartiteGraph& g, const std::string& node,
                                   Side side);
// Opposite-side nodes three hops away, minus the first-order set.
std::set<std::string> third_order(const BipartiteGraph& g, const std::string& node,
                                  Side side);

std::set<std::string> second_order_local(const TemporalGraph& tg,
                                         const std::string& user,
                                         std::size_t span_index);
std::set<std::string> second_order_global(const TemporalGraph& tg,
                                          const std::string& user);

// Debug export: span_index<TAB>user<TAB>product<TAB>timestamp, one edge per line.
void export_edge_list(const TemporalGraph& tg, const ReviewStream& stream,
                      std::ostream& out);

struct DatasetStats {
  std::size_t total_reviews = 0;
  std::size_t distinct_users = 0;
  std::size_t distinct_products = 0;
  double avg_reviews_per_user = 0.0;
  double avg_reviews_per_product = 0.0;
  double avg_second_order_per_user = 0.0;  // on the global graph
};

DatasetStats compute_dataset_stats(const TemporalGraph& tg);

}  // namespace streamsynth
