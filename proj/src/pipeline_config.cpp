#include "streamsynth/pipeline_config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace streamsynth {

void PipelineConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(n_spans, "n_spans");
  positive(floor, "floor");
  positive(k_user_reviews, "k");
  positive(n_products, "n");
  positive(reviews_per_product, "reviews_per_product");
  positive(m_top_products, "m");
  positive(workers, "workers");
  if (backend != "mock" && backend != "remote") {
    throw std::invalid_argument("backend must be mock or remote, got: " + backend);
  }
}

PipelineConfig load_config_file(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    auto as_size = [&] { return static_cast<std::size_t>(std::stoull(value)); };
    if (key == "n_spans") base.n_spans = as_size();
    else if (key == "dense_threshold") base.dense_threshold = as_size();
    else if (key == "so_threshold") base.so_threshold = as_size();
    else if (key == "floor") base.floor = as_size();
    else if (key == "k") base.k_user_reviews = as_size();
    else if (key == "n") base.n_products = as_size();
    else if (key == "reviews_per_product") base.reviews_per_product = as_size();
    else if (key == "m") base.m_top_products = as_size();
    else if (key == "seed") base.seed = std::stoull(value);
    else if (key == "workers") base.workers = as_size();
    else if (key == "backend") base.backend = value;
    else if (key == "template_dir") base.template_dir = value;
    else if (key == "base_url") base.remote.base_url = value;
    else if (key == "model") base.remote.model = value;
    else if (key == "api_key_env") base.remote.api_key_env = value;
    else if (key == "max_retries") base.remote.max_retries = std::stoi(value);
    else if (key == "backoff_initial_ms") base.remote.backoff_initial_ms = std::stoi(value);
    else if (key == "max_in_flight") base.remote.max_in_flight = std::stoi(value);
    else if (key == "timeout_seconds") base.remote.timeout_seconds = std::stoi(value);
    else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown key: " + key);
    }
  }
  return base;
}

std::string config_to_json(const PipelineConfig& cfg) {
  nlohmann::json j = {
      {"n_spans", cfg.n_spans},
      {"dense_threshold", cfg.dense_threshold},
      {"so_threshold", cfg.so_threshold},
      {"floor", cfg.floor},
      {"k", cfg.k_user_reviews},
      {"n", cfg.n_products},
      {"reviews_per_product", cfg.reviews_per_product},
      {"m", cfg.m_top_products},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
      {"backend", cfg.backend},
      {"template_dir", cfg.template_dir},
      {"remote",
       {{"base_url", cfg.remote.base_url},
        {"model", cfg.remote.model},
        {"api_key_env", cfg.remote.api_key_env},
        {"max_retries", cfg.remote.max_retries},
        {"max_in_flight", cfg.remote.max_in_flight}}},
  };
  return j.dump(2);
}

}  // namespace streamsynth
