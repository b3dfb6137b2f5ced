#include "adgen/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <type_traits>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "adgen/errors.hpp"

namespace adgen::corpus {

using ordered_json = nlohmann::ordered_json;

void validate(const AdRecord& r) {
  if (r.id.empty()) throw ValidationError("field 'id': must be non-empty");
  if (r.content.empty())
    throw ValidationError("field 'content': must be non-empty");
}

void validate(const Quadruple& r) {
  if (r.headline.empty())
    throw ValidationError("field 'headline': must be non-empty");
  if (r.keyword.empty())
    throw ValidationError("field 'keyword': must be non-empty");
}

void validate(const HeadlineSet& r) {
  if (r.target_count < 1)
    throw ValidationError("field 'target_count': must be >= 1");
}

void validate(const LabeledQuality& r) {
  if (r.label != 0 && r.label != 1)
    throw ValidationError("field 'label': must be 0 or 1");
}

void validate(const CtrPair& r) {
  if (r.positive == r.negative)
    throw ValidationError("field 'negative': must differ from 'positive'");
}

void validate(const InteractionLog& r) {
  if (r.impressions <= 0)
    throw ValidationError("field 'impressions': must be > 0");
  if (r.clicks < 0) throw ValidationError("field 'clicks': must be >= 0");
  if (r.clicks > r.impressions)
    throw ValidationError("field 'clicks': must not exceed 'impressions'");
}

namespace {

void expect_fields(const ordered_json& j,
                   std::initializer_list<const char*> names) {
  if (!j.is_object()) throw ValidationError("record must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(names.begin(), names.end(), [&](const char* n) {
          return key == n;
        }) == names.end()) {
      throw ValidationError("unknown field '" + key + "'");
    }
  }
  for (const char* n : names) {
    if (!j.contains(n))
      throw ValidationError("field '" + std::string(n) + "': missing");
  }
}

template <class V>
V get_field(const ordered_json& j, const char* name) {
  try {
    return j.at(name).get<V>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("field '" + std::string(name) + "': wrong type");
  }
}

ordered_json to_json(const AdRecord& r) {
  return {{"id", r.id},
          {"content", r.content},
          {"original_title", r.original_title},
          {"topics", r.topics},
          {"caption", r.caption},
          {"taxonomy", r.taxonomy},
          {"timestamp", r.timestamp}};
}

void from_json(const ordered_json& j, AdRecord& r) {
  expect_fields(j, {"id", "content", "original_title", "topics", "caption",
                    "taxonomy", "timestamp"});
  r.id = get_field<std::string>(j, "id");
  r.content = get_field<std::string>(j, "content");
  r.original_title = get_field<std::string>(j, "original_title");
  r.topics = get_field<std::vector<std::string>>(j, "topics");
  r.caption = get_field<std::string>(j, "caption");
  r.taxonomy = get_field<std::string>(j, "taxonomy");
  r.timestamp = get_field<std::int64_t>(j, "timestamp");
}

ordered_json to_json(const Quadruple& r) {
  return {{"ad_id", r.ad_id},
          {"content", r.content},
          {"keyword", r.keyword},
          {"style", style::to_string(r.style)},
          {"headline", r.headline}};
}

void from_json(const ordered_json& j, Quadruple& r) {
  expect_fields(j, {"ad_id", "content", "keyword", "style", "headline"});
  r.ad_id = get_field<std::string>(j, "ad_id");
  r.content = get_field<std::string>(j, "content");
  r.keyword = get_field<std::string>(j, "keyword");
  r.style = style::parse_style(get_field<std::string>(j, "style"));
  r.headline = get_field<std::string>(j, "headline");
}

ordered_json to_json(const HeadlineSet& r) {
  return {{"ad_id", r.ad_id},
          {"raw_output", r.raw_output},
          {"headlines", r.headlines},
          {"target_count", r.target_count}};
}

void from_json(const ordered_json& j, HeadlineSet& r) {
  expect_fields(j, {"ad_id", "raw_output", "headlines", "target_count"});
  r.ad_id = get_field<std::string>(j, "ad_id");
  r.raw_output = get_field<std::string>(j, "raw_output");
  r.headlines = get_field<std::vector<std::string>>(j, "headlines");
  r.target_count = get_field<int>(j, "target_count");
}

ordered_json to_json(const LabeledQuality& r) {
  return {{"content", r.content}, {"headline", r.headline}, {"label", r.label}};
}

void from_json(const ordered_json& j, LabeledQuality& r) {
  expect_fields(j, {"content", "headline", "label"});
  r.content = get_field<std::string>(j, "content");
  r.headline = get_field<std::string>(j, "headline");
  r.label = get_field<int>(j, "label");
}

ordered_json to_json(const CtrPair& r) {
  return {{"content", r.content},
          {"positive", r.positive},
          {"negative", r.negative}};
}

void from_json(const ordered_json& j, CtrPair& r) {
  expect_fields(j, {"content", "positive", "negative"});
  r.content = get_field<std::string>(j, "content");
  r.positive = get_field<std::string>(j, "positive");
  r.negative = get_field<std::string>(j, "negative");
}

ordered_json to_json(const InteractionLog& r) {
  return {{"content", r.content},
          {"headline", r.headline},
          {"impressions", r.impressions},
          {"clicks", r.clicks}};
}

void from_json(const ordered_json& j, InteractionLog& r) {
  expect_fields(j, {"content", "headline", "impressions", "clicks"});
  r.content = get_field<std::string>(j, "content");
  r.headline = get_field<std::string>(j, "headline");
  r.impressions = get_field<long>(j, "impressions");
  r.clicks = get_field<long>(j, "clicks");
}

}  // namespace

template <class T>
std::string to_json_line(const T& record) {
  return to_json(record).dump();
}

template <class T>
T from_json_line(const std::string& line) {
  ordered_json j = ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ValidationError("invalid JSON");
  T record;
  from_json(j, record);
  return record;
}

template <class T>
std::vector<T> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<T> out;
  std::unordered_set<std::string> seen_ids;  // AdRecord ids must be unique
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      T record = from_json_line<T>(line);
      validate(record);
      if constexpr (std::is_same_v<T, AdRecord>) {
        if (!seen_ids.insert(record.id).second)
          throw ValidationError("field 'id': duplicate value " + record.id);
      }
      out.push_back(std::move(record));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + " line " + std::to_string(lineno) +
                            ": " + e.what());
    }
  }
  return out;
}

template <class T>
std::size_t write_records(const std::vector<T>& records,
                          const std::filesystem::path& path) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      validate(records[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw IoError("cannot write file: " + path.string());
  for (const auto& r : records) out << to_json_line(r) << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  return records.size();
}

// Explicit instantiations for the record kinds the file formats cover.
#define ADGEN_INSTANTIATE_RECORD_IO(T)                                      \
  template std::vector<T> read_records<T>(const std::filesystem::path&);   \
  template std::size_t write_records<T>(const std::vector<T>&,             \
                                        const std::filesystem::path&);     \
  template std::string to_json_line<T>(const T&);                          \
  template T from_json_line<T>(const std::string&);

ADGEN_INSTANTIATE_RECORD_IO(AdRecord)
ADGEN_INSTANTIATE_RECORD_IO(Quadruple)
ADGEN_INSTANTIATE_RECORD_IO(HeadlineSet)
ADGEN_INSTANTIATE_RECORD_IO(LabeledQuality)
ADGEN_INSTANTIATE_RECORD_IO(CtrPair)
ADGEN_INSTANTIATE_RECORD_IO(InteractionLog)

#undef ADGEN_INSTANTIATE_RECORD_IO

std::pair<std::vector<AdRecord>, std::vector<AdRecord>> split_chronological(
    std::vector<AdRecord> records, double train_fraction) {
  if (records.empty())
    throw ValidationError("split_chronological: no records");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument(
        "split_chronological: train_fraction must be in (0, 1)");
  std::stable_sort(records.begin(), records.end(),
                   [](const AdRecord& a, const AdRecord& b) {
                     return a.timestamp < b.timestamp;
                   });
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(records.size())));
  std::vector<AdRecord> train(records.begin(),
                              records.begin() + static_cast<long>(n_train));
  std::vector<AdRecord> test(records.begin() + static_cast<long>(n_train),
                             records.end());
  return {std::move(train), std::move(test)};
}

}  // namespace adgen::corpus
