#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "adgen/style.hpp"

namespace adgen::corpus {

// One advertisement: body text plus editorial metadata.
struct AdRecord {
  std::string id;
  std::string content;
  std::string original_title;
  std::vector<std::string> topics;
  std::string caption;
  std::string taxonomy;
  std::int64_t timestamp = 0;  // epoch seconds, used for chronological splits
};

// Enriched training record: content, its semantic keyword, the assigned
// style, and one headline.
struct Quadruple {
  std::string ad_id;
  std::string content;
  std::string keyword;
  style::StyleType style;
  std::string headline;
};

// The set of headlines generated for one ad, with the raw emission kept
// so format scoring can re-parse it.
struct HeadlineSet {
  std::string ad_id;
  std::string raw_output;
  std::vector<std::string> headlines;
  int target_count = 1;
};

struct LabeledQuality {
  std::string content;
  std::string headline;
  int label = 0;  // 1 = high quality
};

struct CtrPair {
  std::string content;
  std::string positive;
  std::string negative;
};

// One row of a user interaction log.
struct InteractionLog {
  std::string content;
  std::string headline;
  long impressions = 0;
  long clicks = 0;
};

// Throws ValidationError naming the offending field.
void validate(const AdRecord& r);
void validate(const Quadruple& r);
void validate(const HeadlineSet& r);
void validate(const LabeledQuality& r);
void validate(const CtrPair& r);
void validate(const InteractionLog& r);

// Line-delimited JSON, one record per line, UTF-8, LF endings, fixed field
// order on write, unknown fields rejected on read. Errors name the line.
template <class T>
std::vector<T> read_records(const std::filesystem::path& path);

template <class T>
std::size_t write_records(const std::vector<T>& records,
                          const std::filesystem::path& path);

// Serialization of a single record to/from its canonical JSON line.
template <class T>
std::string to_json_line(const T& record);
template <class T>
T from_json_line(const std::string& line);

// Stable sort by timestamp; the earliest floor(train_fraction * n) records
// go to train. Requires non-empty input and train_fraction in (0, 1).
std::pair<std::vector<AdRecord>, std::vector<AdRecord>> split_chronological(
    std::vector<AdRecord> records, double train_fraction);

}  // namespace adgen::corpus
