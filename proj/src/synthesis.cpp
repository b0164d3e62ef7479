#include "streamsynth/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "streamsynth/rng.hpp"

namespace streamsynth {

namespace {

constexpr std::uint64_t kSamplingSalt = 0x73796e7468ULL;  // decorrelate from slot_timestamp

std::uint64_t slot_seed(const InterpolationSlot& slot, std::uint64_t seed) {
  return mix64(mix64(seed ^ kSamplingSalt, fnv1a(slot.user_id)),
               mix64(slot.span_index, slot.slot_ordinal));
}

// Review indices attached to a node's edges, in insertion (= chronological) order.
std::vector<std::size_t> node_reviews(const BipartiteGraph& g, const std::string& id,
                                      Side side) {
  const auto& adj = side == Side::User ? g.user_adj : g.product_adj;
  std::vector<std::size_t> out;
  auto it = adj.find(id);
  if (it == adj.end()) return out;
  out.reserve(it->second.size());
  for (const auto& [_, idx] : it->second) out.push_back(idx);
  return out;
}

std::vector<std::string> sampled_texts(const ReviewStream& stream,
                                       const std::vector<std::size_t>& review_ids,
                                       std::size_t cap, SplitMix64& rng,
                                       std::vector<std::size_t>* picked = nullptr) {
  std::vector<std::size_t> chosen = sample_indices(rng, review_ids.size(), cap);
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::string> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) {
    const ReviewRecord& r = stream.records[review_ids[i]];
    out.push_back(r.text.empty() ? "(no text)" : r.text);
    if (picked) picked->push_back(review_ids[i]);
  }
  return out;
}

struct SlotJob {
  const InterpolationSlot* slot;
  const ReviewStream* stream;
  const TemporalGraph* tg;
  GenerationBackend* backend;
  const TemplateSet* templates;
  const SynthesisConfig* cfg;

  std::string prompt_and_complete(const PromptTemplate& tmpl,
                                  const std::map<std::string, std::string>& bindings,
                                  std::vector<std::uint64_t>& hashes) const {
    const std::string prompt = render(tmpl, bindings);
    hashes.push_back(fnv1a(prompt));
    return backend->complete(prompt);
  }
};

// P_pm profile for one product from <= reviews_per_product sampled reviews.
std::string product_profile(const SlotJob& job, const std::string& product,
                            SplitMix64& rng, std::vector<std::uint64_t>& hashes) {
  const auto ids = node_reviews(job.tg->global, product, Side::Product);
  const auto texts =
      sampled_texts(*job.stream, ids, job.cfg->reviews_per_product, rng);
  return job.prompt_and_complete(job.templates->get(TemplateId::P_pm),
                                 {{"product_reviews", join_numbered(texts)}}, hashes);
}

// Shared mid-tail / long-tail product side (Second_Order(First_Order(u)) on
// the global graph): sample N candidates, profile them, let the backend pick
// against the anchor product's profile, return (product id, product profile).
std::pair<std::string, std::string> select_product(const SlotJob& job,
                                                   SplitMix64& rng,
                                                   std::vector<std::uint64_t>& hashes) {
  const std::string& user = job.slot->user_id;
  const BipartiteGraph& g = job.tg->global;

  const std::set<std::string> fo = first_order(g, user, Side::User);
  std::set<std::string> candidate_set;
  for (const std::string& p : fo) {
    for (const std::string& q : second_order(g, p, Side::Product)) {
      candidate_set.insert(q);
    }
  }
  if (candidate_set.empty()) {
    throw SynthesisError(SynthesisError::Kind::NoSecondOrderProducts,
                         "user " + user + " has no second-order products");
  }

  const std::vector<std::string> candidates(candidate_set.begin(), candidate_set.end());
  std::vector<std::size_t> pick = sample_indices(rng, candidates.size(),
                                                 job.cfg->n_products);
  std::sort(pick.begin(), pick.end());
  std::vector<std::string> chosen;
  for (std::size_t i : pick) chosen.push_back(candidates[i]);

  std::vector<std::string> profiles;
  for (const std::string& p : chosen) {
    profiles.push_back(product_profile(job, p, rng, hashes));
  }

  // Anchor: the user's most-reviewed first-order product, ties by the most
  // recent of the user's reviews for it, then id.
  std::string anchor;
  std::size_t anchor_count = 0;
  std::int64_t anchor_ts = -1;
  for (const std::string& p : fo) {
    std::size_t count = 0;
    std::int64_t latest = -1;
    for (const auto& [product, idx] : job.tg->global.user_adj.at(user)) {
      if (product != p) continue;
      ++count;
      latest = std::max(latest, job.stream->records[idx].timestamp);
    }
    if (count > anchor_count || (count == anchor_count && latest > anchor_ts) ||
        anchor.empty()) {
      anchor = p;
      anchor_count = count;
      anchor_ts = latest;
    }
  }
  const std::string anchor_prof = product_profile(job, anchor, rng, hashes);

  const std::string raw = job.prompt_and_complete(
      job.templates->get(TemplateId::P_so),
      {{"original_profile", anchor_prof},
       {"candidate_profiles", join_numbered(profiles)}},
      hashes);
  const std::vector<int> sel = parse_selection(raw, static_cast<int>(chosen.size()));
  const std::size_t idx = static_cast<std::size_t>(sel.front()) - 1;
  return {chosen[idx], profiles[idx]};
}

SyntheticReview finish(const SlotJob& job, const std::string& user_profile,
                       const std::string& product_id, const std::string& product_prof,
                       std::vector<std::uint64_t>& hashes, bool fallback) {
  const std::string raw = job.prompt_and_complete(
      job.templates->get(TemplateId::P_sd),
      {{"user_profile", user_profile}, {"product_profile", product_prof}}, hashes);
  auto [text, rating] = parse_synthetic_review(raw);

  SyntheticReview out;
  out.user_id = job.slot->user_id;
  out.product_id = product_id;
  out.timestamp = slot_timestamp(*job.slot, job.cfg->seed);
  out.rating = rating;
  out.text = std::move(text);
  out.category = job.slot->category;
  out.span_index = job.slot->span_index;
  out.provenance = {std::move(hashes), job.backend->kind(), job.cfg->seed, fallback};
  return out;
}

SyntheticReview extreme_impl(const SlotJob& job, std::size_t user_slot_index,
                             bool fallback) {
  SplitMix64 rng(slot_seed(*job.slot, job.cfg->seed));
  std::vector<std::uint64_t> hashes;
  const std::string& user = job.slot->user_id;

  const auto own = node_reviews(job.tg->global, user, Side::User);
  if (own.empty()) {
    throw SynthesisError(SynthesisError::Kind::NoReviews,
                         "user " + user + " has no reviews");
  }
  const auto own_texts = sampled_texts(*job.stream, own, own.size(), rng);
  const std::string user_prof = job.prompt_and_complete(
      job.templates->get(TemplateId::P_ue), {{"reviews", join_numbered(own_texts)}},
      hashes);

  const std::vector<std::string> top =
      top_products(job.tg->global, job.cfg->m_top_products, *job.stream);
  const std::string& product = top[user_slot_index % top.size()];
  const std::string product_prof = product_profile(job, product, rng, hashes);
  return finish(job, user_prof, product, product_prof, hashes, fallback);
}

}  // namespace

std::vector<std::string> top_products(const BipartiteGraph& g, std::size_t m,
                                      const ReviewStream& stream) {
  struct Ranked {
    std::string id;
    std::size_t count;
    double mean_rating;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(g.product_adj.size());
  for (const auto& [id, edges] : g.product_adj) {
    double sum = 0.0;
    for (const auto& [_, idx] : edges) sum += stream.records[idx].rating;
    ranked.push_back({id, edges.size(), sum / static_cast<double>(edges.size())});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.mean_rating != b.mean_rating) return a.mean_rating > b.mean_rating;
    return a.id < b.id;
  });
  if (ranked.size() > m) ranked.resize(m);
  std::vector<std::string> out;
  for (auto& r : ranked) out.push_back(std::move(r.id));
  return out;
}

SyntheticReview synth_midtail(const InterpolationSlot& slot, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg) {
  SlotJob job{&slot, &stream, &tg, &backend, &templates, &cfg};
  SplitMix64 rng(slot_seed(slot, cfg.seed));
  std::vector<std::uint64_t> hashes;

  const auto own = node_reviews(tg.global, slot.user_id, Side::User);
  if (own.empty()) {
    throw SynthesisError(SynthesisError::Kind::NoReviews,
                         "user " + slot.user_id + " has no reviews");
  }
  const auto own_texts = sampled_texts(stream, own, cfg.k_user_reviews, rng);
  const std::string user_prof = job.prompt_and_complete(
      templates.get(TemplateId::P_um), {{"reviews", join_numbered(own_texts)}}, hashes);

  auto [product, product_prof] = select_product(job, rng, hashes);
  return finish(job, user_prof, product, product_prof, hashes, false);
}

SyntheticReview synth_longtail(const InterpolationSlot& slot, const ReviewStream& stream,
                               const TemporalGraph& tg, GenerationBackend& backend,
                               const TemplateSet& templates, const SynthesisConfig& cfg) {
  SlotJob job{&slot, &stream, &tg, &backend, &templates, &cfg};
  SplitMix64 rng(slot_seed(slot, cfg.seed));
  std::vector<std::uint64_t> hashes;

  const auto own = node_reviews(tg.global, slot.user_id, Side::User);
  if (own.empty()) {
    throw SynthesisError(SynthesisError::Kind::NoReviews,
                         "user " + slot.user_id + " has no reviews");
  }
  const auto own_texts = sampled_texts(stream, own, own.size(), rng);

  // Up to N neighbor users x reviews_per_product reviews for each group.
  auto neighbor_group = [&](const std::set<std::string>& users,
                            const BipartiteGraph& g) {
    const std::vector<std::string> all(users.begin(), users.end());
    std::vector<std::size_t> pick = sample_indices(rng, all.size(), cfg.n_products);
    std::sort(pick.begin(), pick.end());
    std::vector<std::string> texts;
    for (std::size_t i : pick) {
      const auto ids = node_reviews(g, all[i], Side::User);
      for (auto& t : sampled_texts(stream, ids, cfg.reviews_per_product, rng)) {
        texts.push_back(std::move(t));
      }
    }
    return texts;
  };

  const auto local_users = second_order_local(tg, slot.user_id, slot.span_index);
  const auto global_users = second_order_global(tg, slot.user_id);
  const auto local_texts = neighbor_group(local_users, tg.snapshots[slot.span_index]);
  const auto global_texts = neighbor_group(global_users, tg.global);

  const std::string user_prof = job.prompt_and_complete(
      templates.get(TemplateId::P_ul),
      {{"own_reviews", join_numbered(own_texts)},
       {"local_reviews", local_texts.empty() ? "none" : join_numbered(local_texts)},
       {"global_reviews", global_texts.empty() ? "none" : join_numbered(global_texts)}},
      hashes);

  auto [product, product_prof] = select_product(job, rng, hashes);
  return finish(job, user_prof, product, product_prof, hashes, false);
}

SyntheticReview synth_extreme(const InterpolationSlot& slot, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg,
                              std::size_t user_slot_index) {
  SlotJob job{&slot, &stream, &tg, &backend, &templates, &cfg};
  return extreme_impl(job, user_slot_index, false);
}

SynthesisResult run_synthesis(const InterpolationPlan& plan, const ReviewStream& stream,
                              const TemporalGraph& tg, GenerationBackend& backend,
                              const TemplateSet& templates, const SynthesisConfig& cfg) {
  const std::size_t n = plan.slots.size();

  // Position of each slot within its user's slot sequence.
  std::vector<std::size_t> user_slot_index(n, 0);
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      user_slot_index[i] = seen[plan.slots[i].user_id]++;
    }
  }

  std::vector<std::optional<SyntheticReview>> results(n);
  std::vector<std::string> errors(n);

  auto work = [&](std::size_t i) {
    const InterpolationSlot& slot = plan.slots[i];
    const std::string context = "slot " + std::to_string(i) + " (user " + slot.user_id +
                                ", span " + std::to_string(slot.span_index) +
                                ", ordinal " + std::to_string(slot.slot_ordinal) + ")";
    try {
      switch (slot.category) {
        case Category::MidTail:
        case Category::LongTail:
          try {
            results[i] = slot.category == Category::MidTail
                             ? synth_midtail(slot, stream, tg, backend, templates, cfg)
                             : synth_longtail(slot, stream, tg, backend, templates, cfg);
          } catch (const SynthesisError& e) {
            if (e.kind != SynthesisError::Kind::NoSecondOrderProducts) throw;
            SlotJob job{&slot, &stream, &tg, &backend, &templates, &cfg};
            results[i] = extreme_impl(job, user_slot_index[i], true);
          }
          break;
        case Category::Extreme:
          results[i] = synth_extreme(slot, stream, tg, backend, templates, cfg,
                                     user_slot_index[i]);
          break;
        case Category::Normal:
          errors[i] = context + ": Normal users take no slots";
          break;
      }
    } catch (const std::exception& e) {
      errors[i] = context + ": " + e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
          work(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  SynthesisResult out;
  out.report.produced = {{Category::MidTail, 0}, {Category::LongTail, 0},
                         {Category::Extreme, 0}};
  out.records.reserve(stream.records.size() + n);
  for (const ReviewRecord& r : stream.records) {
    out.records.push_back({r, false, Category::Normal});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) {
      if (!errors[i].empty()) out.report.failures.push_back(errors[i]);
      continue;
    }
    const SyntheticReview& s = *results[i];
    ++out.report.produced[s.category];
    if (s.provenance.extreme_fallback) ++out.report.fallback_count;
    out.records.push_back(
        {{s.user_id, s.product_id, s.timestamp, s.rating, s.text}, true, s.category});
    out.synthetic.push_back(s);
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const AugmentedRecord& a, const AugmentedRecord& b) {
                     if (a.record.timestamp != b.record.timestamp)
                       return a.record.timestamp < b.record.timestamp;
                     if (a.record.user_id != b.record.user_id)
                       return a.record.user_id < b.record.user_id;
                     return a.record.product_id < b.record.product_id;
                   });
  return out;
}

}  // namespace streamsynth
