#include "adgen/rewards.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "adgen/parallel.hpp"

namespace adgen::rewards {

std::pair<double, std::vector<std::string>> format_reward(
    const std::string& raw_output) {
  const auto j =
      nlohmann::json::parse(raw_output, nullptr, /*allow_exceptions=*/false);
  if (j.is_array()) {
    std::vector<std::string> headlines;
    headlines.reserve(j.size());
    bool ok = true;
    for (const auto& item : j) {
      if (!item.is_string() || item.get_ref<const std::string&>().empty()) {
        ok = false;
        break;
      }
      headlines.push_back(item.get<std::string>());
    }
    if (ok) return {1.0, std::move(headlines)};
  }
  // Lenient fallback: one headline per non-empty trimmed line.
  std::vector<std::string> fallback;
  std::size_t start = 0;
  const auto flush = [&](std::size_t end) {
    std::size_t a = start, b = end;
    while (a < b && std::isspace(static_cast<unsigned char>(raw_output[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(raw_output[b - 1])))
      --b;
    if (b > a) fallback.push_back(raw_output.substr(a, b - a));
  };
  for (std::size_t i = 0; i < raw_output.size(); ++i) {
    if (raw_output[i] == '\n') {
      flush(i);
      start = i + 1;
    }
  }
  flush(raw_output.size());
  return {0.0, std::move(fallback)};
}

std::string canonical_raw_output(const std::vector<std::string>& headlines) {
  return nlohmann::json(headlines).dump();
}

double quantity_reward(long n, long t) {
  if (t < 1) throw std::invalid_argument("quantity_reward: t must be >= 1");
  if (n < 0) throw std::invalid_argument("quantity_reward: n must be >= 0");
  return std::min(1.0, static_cast<double>(n) / static_cast<double>(t));
}

double diversity_reward(const std::vector<std::string>& headlines,
                        const RewardConfig& config) {
  const std::size_t n = headlines.size();
  if (n == 0) return 0.0;
  const double cov = style::coverage(headlines, config.lexicon);
  const double pb =
      n >= 2 ? text::pair_bleu(text::tokenize_all(headlines), config.bleu) : 0.0;
  return (1.0 - pb + cov) / 2.0;
}

namespace {

// Scorer outputs are clamped to the contractual [0, 1] range.
double clamped_score(const Scorer& scorer, const std::string& content,
                     const std::string& headline) {
  return std::clamp(scorer.score(content, headline), 0.0, 1.0);
}

}  // namespace

double quality_reward(const std::vector<std::string>& headlines,
                      const std::string& content, const Scorer& scorer,
                      const RewardConfig& config) {
  if (headlines.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& h : headlines) {
    const double s = clamped_score(scorer, content, h);
    if (config.quality_mode == QualityMode::threshold_proportion)
      acc += s >= config.faithfulness_threshold ? 1.0 : 0.0;
    else
      acc += s;
  }
  return acc / static_cast<double>(headlines.size());
}

double ctr_reward(const std::vector<std::string>& headlines,
                  const std::string& content, const Scorer& scorer) {
  if (headlines.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& h : headlines) acc += clamped_score(scorer, content, h);
  return acc / static_cast<double>(headlines.size());
}

RewardVector composite_reward(const std::string& content,
                              const std::string& raw_output,
                              const Scorer& quality_scorer,
                              const Scorer& ctr_scorer,
                              const RewardConfig& config) {
  RewardVector rv;
  auto [fmt, headlines] = format_reward(raw_output);
  rv.format = fmt;
  rv.quantity = quantity_reward(static_cast<long>(headlines.size()),
                                config.target_count);
  rv.diversity = diversity_reward(headlines, config);
  rv.quality = quality_reward(headlines, content, quality_scorer, config);
  rv.ctr = ctr_reward(headlines, content, ctr_scorer);
  rv.composite =
      (rv.diversity + rv.quality + rv.ctr + rv.quantity + rv.format) / 5.0;
  return rv;
}

std::vector<RewardVector> score_batch(
    const std::vector<std::pair<std::string, std::string>>& content_and_raw,
    const Scorer& quality_scorer, const Scorer& ctr_scorer,
    const RewardConfig& config) {
  std::vector<RewardVector> out(content_and_raw.size());
  par::for_index(static_cast<long>(content_and_raw.size()), 8, [&](long i) {
    const auto& [content, raw] = content_and_raw[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        composite_reward(content, raw, quality_scorer, ctr_scorer, config);
  });
  return out;
}

}  // namespace adgen::rewards
