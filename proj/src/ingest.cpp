#include "streamsynth/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "json.hpp"

namespace streamsynth {

using nlohmann::json;

ReviewRecord parse_review_line(const std::string& line) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError(ParseError::Kind::MalformedLine, "line is not a JSON object");
  }
  for (const char* field : {"reviewerID", "asin", "unixReviewTime", "overall"}) {
    if (!obj.contains(field)) {
      throw ParseError(ParseError::Kind::MissingField,
                       std::string("missing field: ") + field);
    }
  }

  ReviewRecord r;
  try {
    r.user_id = obj.at("reviewerID").get<std::string>();
    r.product_id = obj.at("asin").get<std::string>();
    r.timestamp = obj.at("unixReviewTime").get<std::int64_t>();
    double overall = obj.at("overall").get<double>();
    r.rating = static_cast<int>(std::trunc(overall));
    if (obj.contains("reviewText") && obj.at("reviewText").is_string()) {
      r.text = obj.at("reviewText").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::MalformedLine, e.what());
  }

  if (r.rating < 1 || r.rating > 5) {
    throw ParseError(ParseError::Kind::BadRating,
                     "overall " + std::to_string(r.rating) + " outside 1-5");
  }
  if (r.timestamp < 0) {
    throw ParseError(ParseError::Kind::MalformedLine, "negative unixReviewTime");
  }
  return r;
}

std::string to_json_line(const ReviewRecord& r, bool synthetic,
                         const std::string& category) {
  json obj;
  obj["reviewerID"] = r.user_id;
  obj["asin"] = r.product_id;
  obj["unixReviewTime"] = r.timestamp;
  obj["overall"] = static_cast<double>(r.rating);
  obj["reviewText"] = r.text;
  if (synthetic) {
    obj["synthetic"] = true;
    obj["category"] = category;
  }
  return obj.dump();
}

void sort_stream(std::vector<ReviewRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ReviewRecord& a, const ReviewRecord& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     if (a.user_id != b.user_id) return a.user_id < b.user_id;
                     return a.product_id < b.product_id;
                   });
}

ReviewStream load_dataset(const std::string& path, const std::string& dataset_name) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file: " + path);
  }
  ReviewStream stream;
  stream.dataset_name = dataset_name.empty()
                            ? std::filesystem::path(path).stem().string()
                            : dataset_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      stream.records.push_back(parse_review_line(line));
    } catch (ParseError& e) {
      ParseError with_line(e.kind, path + ":" + std::to_string(line_no) + ": " + e.what());
      with_line.line_number = line_no;
      throw with_line;
    }
  }
  sort_stream(stream.records);
  return stream;
}

}  // namespace streamsynth
