#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamsynth {

// One (user, product, timestamp, rating, text) event in the review stream.
struct ReviewRecord {
  std::string user_id;
  std::string product_id;
  std::int64_t timestamp = 0;  // seconds since epoch, >= 0
  int rating = 0;              // 1..5
  std::string text;

  bool operator==(const ReviewRecord&) const = default;
};

struct ReviewStream {
  std::vector<ReviewRecord> records;  // sorted by (timestamp, user, product, input order)
  std::string dataset_name;
};

struct ParseError : std::runtime_error {
  enum class Kind { MalformedLine, MissingField, BadRating };
  ParseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
  std::size_t line_number = 0;  // 1-based, set by load_dataset
};

// Parses one Amazon-format JSON review object:
// reviewerID -> user_id, asin -> product_id, unixReviewTime -> timestamp,
// overall -> rating (float truncated toward zero), reviewText -> text
// (missing text becomes "").
ReviewRecord parse_review_line(const std::string& line);

// Serializes a record back to the same JSON-lines carrier. When `synthetic`
// is set, adds "synthetic": true and "category": <name>.
std::string to_json_line(const ReviewRecord& r, bool synthetic = false,
                         const std::string& category = "");

// Loads a whole JSON-lines file and returns the chronologically sorted
// stream. Parse errors carry the 1-based line number.
ReviewStream load_dataset(const std::string& path, const std::string& dataset_name = "");

// Same sort as load_dataset applies: non-decreasing timestamp, ties broken
// by (user_id, product_id, input order).
void sort_stream(std::vector<ReviewRecord>& records);

}  // namespace streamsynth
