#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streamsynth/interpolation.hpp"
#include "streamsynth/llm_gateway.hpp"

namespace streamsynth {

struct SynthesisConfig {
  std::size_t k_user_reviews = 5;       // reviews sampled for a user profile
  std::size_t n_products = 5;           // second-order products sampled
  std::size_t reviews_per_product = 5;  // reviews sampled per product profile
  std::size_t m_top_products = 5;       // top products for extreme users
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct SyntheticReview {
  std::string user_id;
  std::string product_id;
  std::int64_t timestamp = 0;
  int rating = 0;
  std::string text;
  Category category = Category::Extreme;
  std::size_t span_index = 0;

  struct Provenance {
    std::vector<std::uint64_t> prompt_hashes;
    std::string backend_kind;
    std::uint64_t seed = 0;
    bool extreme_fallback = false;
  } provenance;
};

struct SynthesisError : std::runtime_error {
  enum class Kind { NoSecondOrderProducts, NoReviews };
  SynthesisError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

struct SynthesisReport {
  std::map<Category, std::size_t> produced;
  std::size_t fallback_count = 0;
  std::vector<std::string> failures;  // one entry per failed slot, with context
};

struct AugmentedRecord {
  ReviewRecord record;
  bool synthetic = false;
  Category category = Category::Normal;
};

struct SynthesisResult {
  std::vector<AugmentedRecord> records;  // original + synthetic, chronological
  std::vector<SyntheticReview> synthetic;
  SynthesisReport report;
};

// Products ranked by (review count desc, mean rating desc, id asc),
// first min(M, available) returned. The stream resolves edge indices to
// ratings.
std::vector<std::string> top_products(const BipartiteGraph& g, std::size_t m,
                                      const ReviewStream& stream);

// Category pipelines. `user_slot_index` is the slot's position in the user's
// own slot sequence (drives the round-robin top-product choice for the
// extreme path).
SyntheticReview synth_midtail(const InterpolationSlot& slot, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg);
SyntheticReview synth_longtail(const InterpolationSlot& slot, const ReviewStream& stream,
                               const TemporalGraph& tg, GenerationBackend& backend,
                               const TemplateSet& templates, const SynthesisConfig& cfg);
SyntheticReview synth_extreme(const InterpolationSlot& slot, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg,
                              std::size_t user_slot_index);

// Dispatches every slot to its pipeline (mid/long-tail slots with no
// second-order products fall back to the extreme path) and merges the
// output into the original stream in chronological order. Failed slots are
// collected in the report, not thrown.
SynthesisResult run_synthesis(const InterpolationPlan& plan, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg);

}  // namespace streamsynth
