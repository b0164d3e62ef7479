#include "streamsynth/llm_gateway.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "streamsynth/rng.hpp"

#ifdef STREAMSYNTH_WITH_HTTP
#ifdef STREAMSYNTH_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"
#endif

namespace streamsynth {

const char* template_id_name(TemplateId id) {
  switch (id) {
    case TemplateId::P_um: return "P_um";
    case TemplateId::P_ul: return "P_ul";
    case TemplateId::P_ue: return "P_ue";
    case TemplateId::P_pm: return "P_pm";
    case TemplateId::P_so: return "P_so";
    case TemplateId::P_sd: return "P_sd";
  }
  return "?";
}

TemplateSet TemplateSet::load(const std::string& dir) {
  static const std::pair<TemplateId, const char*> kFiles[] = {
      {TemplateId::P_um, "p_um.txt"}, {TemplateId::P_ul, "p_ul.txt"},
      {TemplateId::P_ue, "p_ue.txt"}, {TemplateId::P_pm, "p_pm.txt"},
      {TemplateId::P_so, "p_so.txt"}, {TemplateId::P_sd, "p_sd.txt"},
  };
  TemplateSet set;
  for (const auto& [id, file] : kFiles) {
    const std::filesystem::path path = std::filesystem::path(dir) / file;
    std::ifstream in(path);
    if (!in) {
      throw GatewayError(GatewayError::Kind::TemplateMissing,
                         "template file not found: " + path.string());
    }
    std::ostringstream body;
    body << in.rdbuf();
    set.templates_[id] = PromptTemplate{id, body.str()};
  }
  return set;
}

const PromptTemplate& TemplateSet::get(TemplateId id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw GatewayError(GatewayError::Kind::TemplateMissing,
                       std::string("template not loaded: ") + template_id_name(id));
  }
  return it->second;
}

std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& bindings) {
  std::string out;
  out.reserve(tmpl.body.size());
  for (std::size_t i = 0; i < tmpl.body.size();) {
    if (tmpl.body[i] == '{') {
      const std::size_t close = tmpl.body.find('}', i);
      if (close != std::string::npos) {
        const std::string name = tmpl.body.substr(i + 1, close - i - 1);
        auto it = bindings.find(name);
        if (it == bindings.end()) {
          throw GatewayError(GatewayError::Kind::UnboundPlaceholder,
                             "unbound placeholder {" + name + "} in " +
                                 template_id_name(tmpl.id));
        }
        out += it->second;
        i = close + 1;
        continue;
      }
    }
    out += tmpl.body[i++];
  }
  return out;
}

std::string join_numbered(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += std::to_string(i + 1);
    out += ". ";
    out += items[i];
    if (i + 1 < items.size()) out += '\n';
  }
  return out;
}

namespace {

// Word pool for mock text; just enough variety for lexical-diversity tests.
const char* kMockWords[] = {
    "great", "solid", "value", "quality", "works", "well", "nice", "fit",
    "fast", "shipping", "happy", "with", "this", "purchase", "would", "buy",
    "again", "good", "price", "easy", "use", "setup", "simple", "recommend",
    "product", "exactly", "as", "described", "arrived", "time", "perfect",
    "gift", "item", "sturdy", "design", "color", "size", "love", "it",
    "really", "useful", "everyday", "durable", "reliable", "smooth", "clean",
    "bright", "compact", "handy", "decent", "okay", "fine", "expected",
    "better", "than", "hoped", "for", "family", "friend", "home", "kitchen",
    "office", "read", "issue",
};
constexpr std::size_t kMockWordCount = sizeof(kMockWords) / sizeof(kMockWords[0]);

std::string mock_words(SplitMix64& rng, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += ' ';
    out += kMockWords[rng.bounded(kMockWordCount)];
  }
  return out;
}

std::size_t count_numbered_lines(const std::string& prompt) {
  std::size_t count = 0;
  std::istringstream in(prompt);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i > 0 && i + 1 < line.size() && line[i] == '.' && line[i + 1] == ' ') ++count;
  }
  return count;
}

}  // namespace

std::string MockBackend::complete(const std::string& prompt) {
  const std::uint64_t h = mix64(seed_, fnv1a(prompt));
  SplitMix64 rng(h);

  if (prompt.find("Suitable:") != std::string::npos) {
    const std::size_t candidates = std::max<std::size_t>(1, count_numbered_lines(prompt));
    const std::size_t first = 1 + h % candidates;
    std::string out = "Suitable: " + std::to_string(first);
    if (candidates > 1 && rng.bounded(2) == 1) {
      std::size_t second = 1 + rng.bounded(candidates);
      if (second != first) out += ", " + std::to_string(second);
    }
    return out;
  }
  if (prompt.find("Rating:") != std::string::npos) {
    const int rating = 1 + static_cast<int>(h % 5);
    return "Rating: " + std::to_string(rating) + "\nReview: " +
           mock_words(rng, 8 + rng.bounded(12));
  }
  return "Profile: " + mock_words(rng, 12 + rng.bounded(16));
}

#ifdef STREAMSYNTH_WITH_HTTP

struct RemoteBackend::Impl {
  RemoteConfig cfg;
  std::string api_key;
  std::mutex mu;
  std::condition_variable cv;
  int in_flight = 0;

  explicit Impl(RemoteConfig c) : cfg(std::move(c)) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str())) api_key = key;
  }

  std::string call_once(const std::string& prompt, int& status) {
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(cfg.timeout_seconds);
    client.set_read_timeout(cfg.timeout_seconds);
    nlohmann::json body = {
        {"model", cfg.model},
        {"messages", {{{"role", "user"}, {"content", prompt}}}},
    };
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res) {
      status = 0;
      return {};
    }
    status = res->status;
    if (status != 200) return res->body;
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) {
      status = 0;
      return {};
    }
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  }
};

RemoteBackend::RemoteBackend(RemoteConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}
RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::complete(const std::string& prompt) {
  {
    std::unique_lock lock(impl_->mu);
    impl_->cv.wait(lock,
                   [this] { return impl_->in_flight < impl_->cfg.max_in_flight; });
    ++impl_->in_flight;
  }
  struct Release {
    Impl* impl;
    ~Release() {
      std::lock_guard lock(impl->mu);
      --impl->in_flight;
      impl->cv.notify_one();
    }
  } release{impl_.get()};

  int backoff_ms = impl_->cfg.backoff_initial_ms;
  int last_status = 0;
  for (int attempt = 0; attempt < impl_->cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    int status = 0;
    std::string text = impl_->call_once(prompt, status);
    if (status == 200) return text;
    last_status = status;
  }
  if (last_status == 429) {
    throw GatewayError(GatewayError::Kind::RateLimited,
                       "rate limited after " + std::to_string(impl_->cfg.max_retries) +
                           " attempts; next backoff " + std::to_string(backoff_ms) +
                           "ms");
  }
  throw GatewayError(GatewayError::Kind::BackendUnavailable,
                     "backend unavailable (" + impl_->cfg.base_url + ", last status " +
                         std::to_string(last_status) + ")");
}

#else  // !STREAMSYNTH_WITH_HTTP

struct RemoteBackend::Impl {
  RemoteConfig cfg;
};
RemoteBackend::RemoteBackend(RemoteConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(cfg))) {}
RemoteBackend::~RemoteBackend() = default;
std::string RemoteBackend::complete(const std::string&) {
  throw GatewayError(GatewayError::Kind::BackendUnavailable,
                     "built without HTTP support");
}

#endif

std::unique_ptr<GenerationBackend> make_backend(const std::string& kind,
                                                std::uint64_t seed,
                                                const RemoteConfig& remote) {
  if (kind == "mock") return std::make_unique<MockBackend>(seed);
  if (kind == "remote") return std::make_unique<RemoteBackend>(remote);
  throw std::invalid_argument("unknown backend kind: " + kind);
}

std::vector<int> parse_selection(const std::string& raw, int candidate_count) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (std::isdigit(static_cast<unsigned char>(raw[i]))) {
      std::size_t j = i;
      while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j]))) ++j;
      const int value = std::stoi(raw.substr(i, j - i));
      if (value < 1 || value > candidate_count) {
        throw GatewayError(GatewayError::Kind::IndexOutOfRange,
                           "selection index " + std::to_string(value) +
                               " outside 1-" + std::to_string(candidate_count));
      }
      if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(value);
      i = j;
    } else {
      ++i;
    }
  }
  if (out.empty()) {
    throw GatewayError(GatewayError::Kind::NoSelectionFound,
                       "no selection indices in response");
  }
  return out;
}

std::pair<std::string, int> parse_synthetic_review(const std::string& raw) {
  static const std::regex rating_re(R"(^\s*rating\s*:\s*(-?\d+)\s*$)",
                                    std::regex::icase);
  static const std::regex review_label_re(R"(^\s*review\s*:\s*)", std::regex::icase);

  std::istringstream in(raw);
  std::string line;
  bool found = false;
  int rating = 0;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!found && std::regex_match(line, m, rating_re)) {
      rating = std::stoi(m[1].str());
      found = true;
      continue;
    }
    body.push_back(std::regex_replace(line, review_label_re, ""));
  }
  if (!found) {
    throw GatewayError(GatewayError::Kind::RatingNotFound, "no Rating line in response");
  }
  if (rating < 1 || rating > 5) {
    throw GatewayError(GatewayError::Kind::RatingOutOfRange,
                       "rating " + std::to_string(rating) + " outside 1-5");
  }
  std::string text;
  for (const std::string& l : body) {
    if (!text.empty()) text += '\n';
    text += l;
  }
  // trim
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  text = first == std::string::npos ? "" : text.substr(first, last - first + 1);
  return {text, rating};
}

}  // namespace streamsynth
