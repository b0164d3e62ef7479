#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streamsynth/sparsity.hpp"

namespace streamsynth {

struct InterpolationSlot {
  std::string user_id;
  Category category = Category::Normal;
  std::size_t span_index = 0;
  SpanWindow window;
  std::size_t slot_ordinal = 0;  // distinguishes multiple slots in one span
  bool top_up = false;           // added to push the user's total past the floor
};

struct InterpolationPlan {
  std::vector<InterpolationSlot> slots;
  std::map<Category, std::size_t> category_counts;
  std::size_t floor = 10;
};

struct InterpolationConfig {
  std::size_t floor = 10;  // post-augmentation total must strictly exceed this
};

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// For every MidTail/LongTail/Extreme user: one slot per span with no original
// review, plus round-robin top-up slots over the empty spans (all spans when
// none are empty) until original + slots > floor. Normal users get nothing.
InterpolationPlan plan_interpolation(const ReviewStream& stream,
                                     const TemporalGraph& tg,
                                     const std::vector<SparsityAssignment>& assignments,
                                     const InterpolationConfig& cfg);

// Deterministic seeded uniform timestamp inside the slot's window; a
// degenerate window yields its start.
std::int64_t slot_timestamp(const InterpolationSlot& slot, std::uint64_t seed);

}  // namespace streamsynth
