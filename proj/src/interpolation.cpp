#include "streamsynth/interpolation.hpp"

#include <algorithm>
#include <set>

#include "streamsynth/rng.hpp"

namespace streamsynth {

InterpolationPlan plan_interpolation(const ReviewStream& stream,
                                     const TemporalGraph& tg,
                                     const std::vector<SparsityAssignment>& assignments,
                                     const InterpolationConfig& cfg) {
  if (tg.spans.empty()) {
    throw PlanError("NoSpans: temporal graph has no spans");
  }
  const std::size_t n_spans = tg.n_spans();

  // Which spans each user already covers.
  std::map<std::string, std::set<std::size_t>> covered;
  std::map<std::string, std::size_t> original_count;
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const std::string& u = stream.records[i].user_id;
    covered[u].insert(tg.record_span[i]);
    ++original_count[u];
  }

  InterpolationPlan plan;
  plan.floor = cfg.floor;
  plan.category_counts = {{Category::MidTail, 0}, {Category::LongTail, 0},
                          {Category::Extreme, 0}};

  for (const SparsityAssignment& a : assignments) {
    if (a.category == Category::Normal) continue;

    std::vector<std::size_t> empty_spans;
    const std::set<std::size_t>& have = covered[a.user_id];
    for (std::size_t s = 0; s < n_spans; ++s) {
      if (!have.contains(s)) empty_spans.push_back(s);
    }

    std::vector<std::size_t> ordinal(n_spans, 0);
    std::vector<InterpolationSlot> slots;
    for (std::size_t s : empty_spans) {
      slots.push_back({a.user_id, a.category, s, tg.spans[s], ordinal[s]++, false});
    }

    // Top-up over the empty spans (all spans when the user covers everything)
    // until the total strictly exceeds the floor.
    std::size_t total = original_count[a.user_id] + slots.size();
    const std::vector<std::size_t>* cycle = &empty_spans;
    std::vector<std::size_t> all_spans;
    if (empty_spans.empty()) {
      all_spans.resize(n_spans);
      for (std::size_t s = 0; s < n_spans; ++s) all_spans[s] = s;
      cycle = &all_spans;
    }
    for (std::size_t i = 0; total <= cfg.floor; ++i, ++total) {
      const std::size_t s = (*cycle)[i % cycle->size()];
      slots.push_back({a.user_id, a.category, s, tg.spans[s], ordinal[s]++, true});
    }

    std::sort(slots.begin(), slots.end(),
              [](const InterpolationSlot& x, const InterpolationSlot& y) {
                if (x.span_index != y.span_index) return x.span_index < y.span_index;
                return x.slot_ordinal < y.slot_ordinal;
              });
    plan.category_counts[a.category] += slots.size();
    for (auto& s : slots) plan.slots.push_back(std::move(s));
  }
  return plan;
}

std::int64_t slot_timestamp(const InterpolationSlot& slot, std::uint64_t seed) {
  const SpanWindow& w = slot.window;
  const std::int64_t last = w.closed ? w.end : w.end - 1;
  if (last <= w.start) return w.start;
  SplitMix64 rng(mix64(mix64(seed, fnv1a(slot.user_id)),
                       mix64(slot.span_index, slot.slot_ordinal)));
  return w.start + static_cast<std::int64_t>(
                       rng.bounded(static_cast<std::uint64_t>(last - w.start + 1)));
}

}  // namespace streamsynth
