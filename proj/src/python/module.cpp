#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "streamsynth/lexical_stats.hpp"
#include "streamsynth/pipeline_config.hpp"
#include "streamsynth/synthesis.hpp"

namespace py = pybind11;
using namespace streamsynth;

namespace {

struct Session {
  ReviewStream stream;
  TemporalGraph tg;
};

Session make_session(const std::string& path, std::size_t n_spans) {
  Session s;
  s.stream = load_dataset(path);
  s.tg = build_temporal_graph(s.stream, n_spans);
  return s;
}

py::dict stats_dict(const DatasetStats& st) {
  py::dict d;
  d["total_reviews"] = st.total_reviews;
  d["distinct_users"] = st.distinct_users;
  d["distinct_products"] = st.distinct_products;
  d["avg_reviews_per_user"] = st.avg_reviews_per_user;
  d["avg_reviews_per_product"] = st.avg_reviews_per_product;
  d["avg_second_order_per_user"] = st.avg_second_order_per_user;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparsity-aware review stream augmentation (C++ core bindings)";

  py::class_<ReviewRecord>(m, "ReviewRecord")
      .def(py::init<>())
      .def_readwrite("user_id", &ReviewRecord::user_id)
      .def_readwrite("product_id", &ReviewRecord::product_id)
      .def_readwrite("timestamp", &ReviewRecord::timestamp)
      .def_readwrite("rating", &ReviewRecord::rating)
      .def_readwrite("text", &ReviewRecord::text)
      .def("__repr__", [](const ReviewRecord& r) {
        return "<ReviewRecord " + r.user_id + " -> " + r.product_id + ">";
      });

  py::class_<Session>(m, "Session")
      .def(py::init(&make_session), py::arg("path"), py::arg("n_spans") = 10)
      .def_property_readonly(
          "records", [](const Session& s) { return s.stream.records; })
      .def_property_readonly("n_spans",
                             [](const Session& s) { return s.tg.n_spans(); })
      .def("stats",
           [](const Session& s) { return stats_dict(compute_dataset_stats(s.tg)); })
      .def(
          "first_order",
          [](const Session& s, const std::string& node, bool user_side) {
            return first_order(s.tg.global, node,
                               user_side ? Side::User : Side::Product);
          },
          py::arg("node"), py::arg("user_side") = true)
      .def(
          "second_order",
          [](const Session& s, const std::string& node, bool user_side) {
            return second_order(s.tg.global, node,
                                user_side ? Side::User : Side::Product);
          },
          py::arg("node"), py::arg("user_side") = true)
      .def(
          "classify",
          [](const Session& s, std::size_t dense_threshold,
             std::size_t so_threshold, std::uint64_t seed) {
            SparsityConfig cfg{dense_threshold, so_threshold, seed};
            std::map<std::string, std::string> out;
            for (const auto& a : classify_users(s.stream, s.tg, cfg))
              out[a.user_id] = category_name(a.category);
            return out;
          },
          py::arg("dense_threshold") = 5, py::arg("so_threshold") = 10,
          py::arg("seed") = 0)
      .def(
          "plan",
          [](const Session& s, std::size_t floor) {
            const auto assignments = classify_users(s.stream, s.tg, {});
            const auto plan =
                plan_interpolation(s.stream, s.tg, assignments, {floor});
            py::list slots;
            for (const auto& slot : plan.slots) {
              py::dict d;
              d["user_id"] = slot.user_id;
              d["category"] = category_name(slot.category);
              d["span_index"] = slot.span_index;
              d["top_up"] = slot.top_up;
              slots.append(d);
            }
            return slots;
          },
          py::arg("floor") = 10)
      .def(
          "synthesize",
          [](const Session& s, const std::string& template_dir,
             std::uint64_t seed, std::size_t workers) {
            const auto assignments = classify_users(s.stream, s.tg, {});
            const auto plan = plan_interpolation(s.stream, s.tg, assignments, {});
            const TemplateSet templates = TemplateSet::load(template_dir);
            MockBackend backend(seed);
            SynthesisConfig cfg;
            cfg.seed = seed;
            cfg.workers = workers;
            const SynthesisResult r =
                run_synthesis(plan, s.stream, s.tg, backend, templates, cfg);
            py::list lines;
            for (const AugmentedRecord& rec : r.records) {
              lines.append(to_json_line(rec.record, rec.synthetic,
                                        category_name(rec.category)));
            }
            py::dict out;
            out["lines"] = lines;
            out["synthetic_count"] = r.synthetic.size();
            out["failure_count"] = r.report.failures.size();
            return out;
          },
          py::arg("template_dir"), py::arg("seed") = 0, py::arg("workers") = 1);

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def(
      "richness",
      [](const std::vector<std::string>& texts) -> py::object {
        const auto v = richness(texts);
        return v ? py::cast(*v) : py::none();
      },
      py::arg("texts"));
  m.def("parse_review_line", &parse_review_line, py::arg("line"));
}
