#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "streamsynth/interpolation.hpp"
#include "streamsynth/lexical_stats.hpp"
#include "streamsynth/pipeline_config.hpp"
#include "streamsynth/rng.hpp"
#include "streamsynth/synthesis.hpp"

namespace fs = std::filesystem;
using namespace streamsynth;

namespace {

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return h;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::string& input, const PipelineConfig& cfg) {
  nlohmann::json manifest = {
      {"command", command},
      {"input", input},
      {"input_fnv1a", [&] {
         std::ostringstream os;
         os << std::hex << std::setw(16) << std::setfill('0') << hash_file(input);
         return os.str();
       }()},
      {"seed", cfg.seed},
      {"config", nlohmann::json::parse(config_to_json(cfg))},
  };
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
}

struct CommonOpts {
  std::string input;
  std::string config_file;
  std::string out_dir = ".";
  // CLI overrides; only applied when the user passed them.
  CLI::App* cmd = nullptr;

  void attach(CLI::App* app, PipelineConfig& cfg) {
    cmd = app;
    app->add_option("--input", input, "JSON-lines review file")->required();
    app->add_option("--config", config_file, "key = value config file");
    app->add_option("--out-dir", out_dir, "directory for output artifacts");
    app->add_option("--seed", cfg.seed, "random seed");
    app->add_option("--backend", cfg.backend, "generation backend")
        ->check(CLI::IsMember({"mock", "remote"}));
    app->add_option("--n-spans", cfg.n_spans, "number of timespans");
    app->add_option("--dense-threshold", cfg.dense_threshold,
                    "review count above which a user is dense");
    app->add_option("--so-threshold", cfg.so_threshold,
                    "second-order degree separating long-tail from extreme");
    app->add_option("--floor", cfg.floor, "post-augmentation per-user review floor");
    app->add_option("--templates", cfg.template_dir, "prompt template directory");
    app->add_option("--workers", cfg.workers, "max concurrent synthesis slots");
  }

  // flags > file > defaults
  PipelineConfig resolve(const PipelineConfig& cli_values) const {
    if (config_file.empty()) return cli_values;
    PipelineConfig from_file = load_config_file(config_file);
    PipelineConfig merged = from_file;
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--seed")) merged.seed = cli_values.seed;
    if (passed("--backend")) merged.backend = cli_values.backend;
    if (passed("--n-spans")) merged.n_spans = cli_values.n_spans;
    if (passed("--dense-threshold")) merged.dense_threshold = cli_values.dense_threshold;
    if (passed("--so-threshold")) merged.so_threshold = cli_values.so_threshold;
    if (passed("--floor")) merged.floor = cli_values.floor;
    if (passed("--templates")) merged.template_dir = cli_values.template_dir;
    if (passed("--workers")) merged.workers = cli_values.workers;
    return merged;
  }
};

SparsityConfig sparsity_config(const PipelineConfig& cfg) {
  return {cfg.dense_threshold, cfg.so_threshold, cfg.seed};
}

SynthesisConfig synthesis_config(const PipelineConfig& cfg) {
  return {cfg.k_user_reviews, cfg.n_products, cfg.reviews_per_product,
          cfg.m_top_products, cfg.seed, cfg.workers};
}

void write_classification(const fs::path& path,
                          const std::vector<SparsityAssignment>& assignments) {
  std::ofstream out(path);
  for (const SparsityAssignment& a : assignments) {
    out << a.user_id << '\t' << category_name(a.category) << '\t'
        << a.stats.review_count << '\t' << a.stats.second_order_degree << '\n';
  }
}

std::map<std::string, Category> load_classification(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open classification file: " + path);
  std::map<std::string, Category> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string user, category;
    std::getline(row, user, '\t');
    std::getline(row, category, '\t');
    out[user] = category_from_name(category);
  }
  return out;
}

void write_plan(const fs::path& path, const InterpolationPlan& plan,
                std::uint64_t seed) {
  std::ofstream out(path);
  for (const InterpolationSlot& s : plan.slots) {
    out << s.user_id << '\t' << category_name(s.category) << '\t' << s.span_index
        << '\t' << s.slot_ordinal << '\t' << slot_timestamp(s, seed) << '\n';
  }
}

// Plan rows pin their timestamps by collapsing each slot's window to the
// recorded instant, so a re-run against a stored plan reproduces it exactly.
InterpolationPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file: " + path);
  InterpolationPlan plan;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string user, category, span, ordinal, ts;
    std::getline(row, user, '\t');
    std::getline(row, category, '\t');
    std::getline(row, span, '\t');
    std::getline(row, ordinal, '\t');
    std::getline(row, ts, '\t');
    InterpolationSlot slot;
    slot.user_id = user;
    slot.category = category_from_name(category);
    slot.span_index = std::stoull(span);
    slot.slot_ordinal = std::stoull(ordinal);
    const std::int64_t t = std::stoll(ts);
    slot.window = {slot.span_index, t, t, true};
    plan.category_counts[slot.category]++;
    plan.slots.push_back(std::move(slot));
  }
  return plan;
}

std::vector<SparsityAssignment> classify_or_load(const ReviewStream& stream,
                                                 const TemporalGraph& tg,
                                                 const PipelineConfig& cfg,
                                                 const std::string& classification_file) {
  std::vector<SparsityAssignment> assignments =
      classify_users(stream, tg, sparsity_config(cfg));
  if (!classification_file.empty()) {
    const auto categories = load_classification(classification_file);
    for (SparsityAssignment& a : assignments) {
      auto it = categories.find(a.user_id);
      if (it != categories.end()) a.category = it->second;
    }
  }
  return assignments;
}

int cmd_stats(const CommonOpts& opts, const PipelineConfig& cfg,
              const std::string& export_graph) {
  const ReviewStream stream = load_dataset(opts.input);
  std::ostringstream table;
  if (stream.records.empty()) {
    table << "total_reviews\t0\ndistinct_users\t0\ndistinct_products\t0\n"
          << "avg_reviews_per_user\t0.00\navg_reviews_per_product\t0.00\n"
          << "avg_second_order_per_user\t0.00\n";
  } else {
    const TemporalGraph tg = build_temporal_graph(stream, cfg.n_spans);
    const DatasetStats s = compute_dataset_stats(tg);
    table << std::fixed << std::setprecision(2);
    table << "total_reviews\t" << s.total_reviews << '\n'
          << "distinct_users\t" << s.distinct_users << '\n'
          << "distinct_products\t" << s.distinct_products << '\n'
          << "avg_reviews_per_user\t" << s.avg_reviews_per_user << '\n'
          << "avg_reviews_per_product\t" << s.avg_reviews_per_product << '\n'
          << "avg_second_order_per_user\t" << s.avg_second_order_per_user << '\n';
    if (!export_graph.empty()) {
      std::ofstream out(export_graph);
      export_edge_list(tg, stream, out);
    }
  }
  std::cout << table.str();
  std::ofstream(fs::path(opts.out_dir) / "stats.txt") << table.str();
  write_manifest(opts.out_dir, "stats", opts.input, cfg);
  return 0;
}

int cmd_classify(const CommonOpts& opts, const PipelineConfig& cfg) {
  const ReviewStream stream = load_dataset(opts.input);
  const TemporalGraph tg = build_temporal_graph(stream, cfg.n_spans);
  const auto assignments = classify_users(stream, tg, sparsity_config(cfg));
  write_classification(fs::path(opts.out_dir) / "classification.tsv", assignments);
  write_manifest(opts.out_dir, "classify", opts.input, cfg);

  std::map<Category, std::size_t> counts;
  for (const auto& a : assignments) ++counts[a.category];
  for (Category c : {Category::Normal, Category::MidTail, Category::LongTail,
                     Category::Extreme}) {
    std::cout << category_name(c) << '\t' << counts[c] << '\n';
  }
  return 0;
}

int cmd_plan(const CommonOpts& opts, const PipelineConfig& cfg,
             const std::string& classification_file) {
  const ReviewStream stream = load_dataset(opts.input);
  const TemporalGraph tg = build_temporal_graph(stream, cfg.n_spans);
  const auto assignments = classify_or_load(stream, tg, cfg, classification_file);
  const InterpolationPlan plan =
      plan_interpolation(stream, tg, assignments, {cfg.floor});
  write_plan(fs::path(opts.out_dir) / "plan.tsv", plan, cfg.seed);
  write_manifest(opts.out_dir, "plan", opts.input, cfg);
  for (Category c : {Category::MidTail, Category::LongTail, Category::Extreme}) {
    std::cout << category_name(c) << '\t' << plan.category_counts.at(c) << '\n';
  }
  return 0;
}

int cmd_synthesize(const CommonOpts& opts, const PipelineConfig& cfg,
                   const std::string& classification_file,
                   const std::string& plan_file) {
  const ReviewStream stream = load_dataset(opts.input);
  const TemporalGraph tg = build_temporal_graph(stream, cfg.n_spans);
  const auto assignments = classify_or_load(stream, tg, cfg, classification_file);
  const InterpolationPlan plan =
      plan_file.empty() ? plan_interpolation(stream, tg, assignments, {cfg.floor})
                        : load_plan(plan_file);

  const TemplateSet templates = TemplateSet::load(cfg.template_dir);
  auto backend = make_backend(cfg.backend, cfg.seed, cfg.remote);
  const SynthesisResult result =
      run_synthesis(plan, stream, tg, *backend, templates, synthesis_config(cfg));

  if (!result.report.failures.empty() && result.synthetic.empty() &&
      cfg.backend == "remote") {
    // Remote never came up: report and keep the output directory free of a
    // partial augmented stream.
    for (const std::string& f : result.report.failures) std::cerr << f << '\n';
    write_manifest(opts.out_dir, "synthesize", opts.input, cfg);
    return 1;
  }

  {
    std::ofstream out(fs::path(opts.out_dir) / "augmented.jsonl");
    for (const AugmentedRecord& r : result.records) {
      out << to_json_line(r.record, r.synthetic, category_name(r.category)) << '\n';
    }
  }
  {
    nlohmann::json report = {
        {"produced",
         {{"MidTail", result.report.produced.at(Category::MidTail)},
          {"LongTail", result.report.produced.at(Category::LongTail)},
          {"Extreme", result.report.produced.at(Category::Extreme)}}},
        {"fallbacks", result.report.fallback_count},
        {"failures", result.report.failures},
    };
    std::ofstream(fs::path(opts.out_dir) / "synthesis_report.json")
        << report.dump(2) << '\n';
  }
  write_manifest(opts.out_dir, "synthesize", opts.input, cfg);

  std::cout << "synthesized " << result.synthetic.size() << " reviews, "
            << result.report.failures.size() << " failed, "
            << result.report.fallback_count << " fallbacks\n";
  for (const std::string& f : result.report.failures) std::cerr << f << '\n';
  return result.report.failures.empty() ? 0 : 1;
}

int cmd_richness(const CommonOpts& opts, const PipelineConfig& cfg) {
  std::ifstream in(opts.input);
  if (!in) throw std::runtime_error("cannot open input file: " + opts.input);

  std::map<std::string, std::vector<std::string>> groups;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json obj = nlohmann::json::parse(line);
    std::string group = "original";
    if (obj.value("synthetic", false)) {
      group = "synthetic-" + obj.value("category", std::string("?"));
    }
    groups[group].push_back(obj.value("reviewText", std::string()));
  }
  const RichnessReport report = richness_report(groups);

  nlohmann::json j;
  std::ostringstream table;
  table << std::left << std::setw(22) << "group" << std::right << std::setw(10)
        << "mean_ttr" << std::setw(10) << "tokens" << std::setw(10) << "reviews"
        << '\n';
  for (const auto& [group, g] : report.groups) {
    j[group] = {{"mean_ttr", g.mean_ttr},
                {"token_count", g.token_count},
                {"review_count", g.review_count}};
    table << std::left << std::setw(22) << group << std::right << std::fixed
          << std::setprecision(4) << std::setw(10) << g.mean_ttr << std::setw(10)
          << g.token_count << std::setw(10) << g.review_count << '\n';
  }
  std::cout << table.str();
  std::ofstream(fs::path(opts.out_dir) / "richness.json") << j.dump(2) << '\n';
  std::ofstream(fs::path(opts.out_dir) / "richness.txt") << table.str();
  write_manifest(opts.out_dir, "richness", opts.input, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsity-aware review stream augmentation"};
  app.require_subcommand(1);

  struct SubState {
    CommonOpts opts;
    PipelineConfig cfg;
  };
  std::map<std::string, SubState> state;
  std::string export_graph, classification_file, plan_file;

  for (const char* name : {"stats", "classify", "plan", "synthesize", "richness"}) {
    CLI::App* sub = app.add_subcommand(name);
    state[name].opts.attach(sub, state[name].cfg);
  }
  app.get_subcommand("stats")->add_option("--export-graph", export_graph,
                                          "write a span-tagged edge list here");
  app.get_subcommand("plan")->add_option("--classification", classification_file,
                                         "reuse a classification.tsv");
  app.get_subcommand("synthesize")
      ->add_option("--classification", classification_file,
                   "reuse a classification.tsv");
  app.get_subcommand("synthesize")
      ->add_option("--plan", plan_file, "reuse a plan.tsv (timestamps pinned)");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [name, st] : state) {
      CLI::App* sub = app.get_subcommand(name);
      if (!sub->parsed()) continue;
      const PipelineConfig cfg = st.opts.resolve(st.cfg);
      cfg.validate();
      fs::create_directories(st.opts.out_dir);
      if (name == "stats") return cmd_stats(st.opts, cfg, export_graph);
      if (name == "classify") return cmd_classify(st.opts, cfg);
      if (name == "plan") return cmd_plan(st.opts, cfg, classification_file);
      if (name == "synthesize")
        return cmd_synthesize(st.opts, cfg, classification_file, plan_file);
      if (name == "richness") return cmd_richness(st.opts, cfg);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
