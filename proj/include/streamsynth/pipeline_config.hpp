#pragma once

#include <cstdint>
#include <string>

#include "streamsynth/llm_gateway.hpp"

namespace streamsynth {

// All the pipeline's free parameters. Precedence: CLI flags > config file >
// these defaults.
struct PipelineConfig {
  std::size_t n_spans = 10;
  std::size_t dense_threshold = 5;
  std::size_t so_threshold = 10;
  std::size_t floor = 10;
  std::size_t k_user_reviews = 5;
  std::size_t n_products = 5;
  std::size_t reviews_per_product = 5;
  std::size_t m_top_products = 5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string backend = "mock";
  std::string template_dir = "templates";
  RemoteConfig remote;

  void validate() const;  // throws std::invalid_argument
};

// key = value lines; '#' starts a comment; unknown keys are an error.
PipelineConfig load_config_file(const std::string& path, PipelineConfig base = {});

// JSON echo of every field, for run manifests.
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace streamsynth
