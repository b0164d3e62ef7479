#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace streamsynth {

enum class TemplateId { P_um, P_ul, P_ue, P_pm, P_so, P_sd };

const char* template_id_name(TemplateId id);

struct PromptTemplate {
  TemplateId id;
  std::string body;  // text with {placeholder} markers
};

struct GatewayError : std::runtime_error {
  enum class Kind {
    UnboundPlaceholder,
    BackendUnavailable,
    RateLimited,
    NoSelectionFound,
    IndexOutOfRange,
    RatingNotFound,
    RatingOutOfRange,
    TemplateMissing,
  };
  GatewayError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

// The six prompt templates, loaded from editable resource files
// (p_um.txt, p_ul.txt, p_ue.txt, p_pm.txt, p_so.txt, p_sd.txt).
class TemplateSet {
 public:
  static TemplateSet load(const std::string& dir);
  const PromptTemplate& get(TemplateId id) const;

 private:
  std::map<TemplateId, PromptTemplate> templates_;
};

// Substitutes every {placeholder} in the body; an unbound placeholder throws.
std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& bindings);

// "1. first\n2. second\n..." — the list form review groups and candidate
// profiles take inside prompts.
std::string join_numbered(const std::vector<std::string>& items);

struct Profile {
  std::string subject_id;
  enum class Kind { User, Product } kind = Kind::User;
  std::string text;
  std::vector<std::size_t> source_review_ids;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual const char* kind() const = 0;
};

// Deterministic offline backend: output is a pure function of (seed, prompt),
// shaped to satisfy the parser for whichever template produced the prompt.
class MockBackend : public GenerationBackend {
 public:
  explicit MockBackend(std::uint64_t seed) : seed_(seed) {}
  std::string complete(const std::string& prompt) override;
  const char* kind() const override { return "mock"; }

 private:
  std::uint64_t seed_;
};

struct RemoteConfig {
  std::string base_url = "https://api.openai.com";
  std::string model = "gpt-3.5-turbo";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_retries = 3;
  int backoff_initial_ms = 500;
  int max_in_flight = 4;
  int timeout_seconds = 60;
};

// Chat-completion client with bounded retry/backoff and an in-flight cap.
class RemoteBackend : public GenerationBackend {
 public:
  explicit RemoteBackend(RemoteConfig cfg);
  ~RemoteBackend() override;
  std::string complete(const std::string& prompt) override;
  const char* kind() const override { return "remote"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<GenerationBackend> make_backend(const std::string& kind,
                                                std::uint64_t seed,
                                                const RemoteConfig& remote);

// Extracts the 1-based index list from a selection response; deduplicated,
// order-preserving. No digits -> NoSelectionFound; any index outside
// [1, candidate_count] -> IndexOutOfRange.
std::vector<int> parse_selection(const std::string& raw, int candidate_count);

// Returns (review_text, rating) from a response whose first
// "Rating: <int>" line carries the label.
std::pair<std::string, int> parse_synthetic_review(const std::string& raw);

}  // namespace streamsynth
