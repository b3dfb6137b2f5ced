#include "adgen/harness.hpp"

#include <algorithm>
#include <bitset>
#include <cstdio>
#include <unordered_map>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "adgen/errors.hpp"
#include "adgen/parallel.hpp"

namespace adgen::harness {

namespace {

struct PerSet {
  std::optional<double> pair_bleu;
  std::optional<double> self_bleu;
  std::optional<double> cos_sim;
  std::optional<double> coverage;
  std::bitset<style::kStyleCount> styles;
  double rouge1_sum = 0.0, rouge2_sum = 0.0, rougeL_sum = 0.0;
  double nli_sum = 0.0;
  long pair_count = 0;  // (headline, reference) pairs
};

std::optional<double> mean_of(const std::vector<PerSet>& sets,
                              std::optional<double> PerSet::*field) {
  double sum = 0.0;
  long n = 0;
  for (const auto& s : sets) {
    if ((s.*field).has_value()) {
      sum += *(s.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

MetricReport evaluate_sets(
    const std::vector<corpus::HeadlineSet>& generated,
    const std::vector<std::pair<std::string, std::string>>& references,
    const embedding::EmbeddingProvider& provider, const EvalConfig& config) {
  std::unordered_map<std::string, const std::string*> ref_by_id;
  for (const auto& [id, title] : references) ref_by_id.emplace(id, &title);
  for (const auto& s : generated) {
    if (!ref_by_id.count(s.ad_id))
      throw ValidationError("evaluate_sets: no reference for ad_id " + s.ad_id);
  }

  std::vector<PerSet> per_set(generated.size());
  adgen::par::for_index(static_cast<long>(generated.size()), 4, [&](long i) {
    const auto& set = generated[static_cast<std::size_t>(i)];
    PerSet& out = per_set[static_cast<std::size_t>(i)];
    const auto& headlines = set.headlines;
    if (headlines.size() >= 2) {
      const auto toks = text::tokenize_all(headlines);
      out.pair_bleu = 100.0 * text::pair_bleu(toks, config.bleu);
      out.self_bleu = 100.0 * text::self_bleu(toks, config.bleu);
      out.cos_sim = embedding::avg_pairwise_cosine(headlines, provider);
    }
    if (!headlines.empty()) {
      out.coverage = 100.0 * style::coverage(headlines, config.lexicon);
      for (const auto& h : headlines)
        out.styles.set(style::style_index(style::classify_style(h, config.lexicon)));
    }
    const std::string& title = *ref_by_id.at(set.ad_id);
    const text::TokenSeq ref_toks = text::tokenize(title);
    for (const auto& h : headlines) {
      const text::TokenSeq cand = text::tokenize(h);
      out.rouge1_sum += text::rouge_n(cand, ref_toks, 1).f1;
      out.rouge2_sum += text::rouge_n(cand, ref_toks, 2).f1;
      out.rougeL_sum += text::rouge_l(cand, ref_toks).f1;
      if (config.use_nli) {
        const auto it = config.nli_scores.find({set.ad_id, h});
        if (it == config.nli_scores.end())
          throw ValidationError("evaluate_sets: no NLI score for ad_id " +
                                set.ad_id + " headline " + h);
        out.nli_sum += it->second;
      }
      ++out.pair_count;
    }
  });

  MetricReport report;
  report.set_count = static_cast<int>(generated.size());
  report.pair_bleu = mean_of(per_set, &PerSet::pair_bleu);
  report.self_bleu = mean_of(per_set, &PerSet::self_bleu);
  report.cos_sim = mean_of(per_set, &PerSet::cos_sim);
  report.style_cov_per_set = mean_of(per_set, &PerSet::coverage);

  if (!report.pair_bleu)
    report.absent["pair_bleu"] = "no set with at least 2 headlines";
  if (!report.self_bleu)
    report.absent["self_bleu"] = "no set with at least 2 headlines";
  if (!report.cos_sim)
    report.absent["cos_sim"] = "no set with at least 2 headlines";
  if (!report.style_cov_per_set)
    report.absent["style_cov"] = "no non-empty set";

  std::bitset<style::kStyleCount> pooled_styles;
  for (const auto& s : per_set) pooled_styles |= s.styles;
  bool any_headline = false;
  for (const auto& s : generated) any_headline |= !s.headlines.empty();
  if (any_headline) {
    report.style_cov = 100.0 * static_cast<double>(pooled_styles.count()) /
                       style::kStyleCount;
  }

  // Distinct n-grams pooled over every headline of every set.
  {
    std::vector<text::TokenSeq> pooled;
    for (const auto& s : generated)
      for (const auto& h : s.headlines) pooled.push_back(text::tokenize(h));
    long unigrams = 0, bigrams = 0;
    for (const auto& t : pooled) {
      unigrams += text::ngram_total(t, 1);
      bigrams += text::ngram_total(t, 2);
    }
    if (unigrams > 0 && bigrams > 0) {
      report.distinct_ngram = 100.0 * (text::distinct_n(pooled, 1) +
                                       text::distinct_n(pooled, 2)) / 2.0;
    } else {
      report.absent["distinct_ngram"] = "no bigrams across the pooled set";
    }
  }

  double r1 = 0.0, r2 = 0.0, rl = 0.0, nli = 0.0;
  long pairs = 0;
  for (const auto& s : per_set) {
    r1 += s.rouge1_sum;
    r2 += s.rouge2_sum;
    rl += s.rougeL_sum;
    nli += s.nli_sum;
    pairs += s.pair_count;
  }
  if (pairs > 0) {
    report.rouge1 = 100.0 * r1 / static_cast<double>(pairs);
    report.rouge2 = 100.0 * r2 / static_cast<double>(pairs);
    report.rougeL = 100.0 * rl / static_cast<double>(pairs);
    if (config.use_nli) report.nli = 100.0 * nli / static_cast<double>(pairs);
  } else {
    report.absent["rouge"] = "no (headline, reference) pairs";
  }

  report.conventions["bleu_max_n"] = std::to_string(config.bleu.max_n);
  report.conventions["bleu_smoothing"] = config.bleu.smooth ? "add-one" : "off";
  report.conventions["coverage_denominator"] = "min(N,16)";
  report.conventions["distinct_ngram"] =
      "mean of distinct-1 and distinct-2 over pooled headlines, x100";
  report.conventions["style_cov"] = "pooled distinct styles / 16, x100";
  report.conventions["style_cov_per_set"] = "mean per-set coverage, x100";
  report.conventions["rouge"] = "mean F1 vs single reference title, x100";
  report.conventions["cos_sim"] = "mean pairwise cosine per set, x100";
  report.conventions["embedding"] = provider.name();
  if (config.use_nli)
    report.conventions["nli"] = "mean precomputed entailment score, x100";
  return report;
}

namespace {

const std::vector<std::pair<const char*, std::optional<double> MetricReport::*>>&
metric_fields() {
  static const std::vector<
      std::pair<const char*, std::optional<double> MetricReport::*>>
      fields = {{"pair_bleu", &MetricReport::pair_bleu},
                {"self_bleu", &MetricReport::self_bleu},
                {"distinct_ngram", &MetricReport::distinct_ngram},
                {"cos_sim", &MetricReport::cos_sim},
                {"style_cov", &MetricReport::style_cov},
                {"style_cov_per_set", &MetricReport::style_cov_per_set},
                {"nli", &MetricReport::nli},
                {"rouge1", &MetricReport::rouge1},
                {"rouge2", &MetricReport::rouge2},
                {"rougeL", &MetricReport::rougeL}};
  return fields;
}

}  // namespace

std::string report_to_json(const MetricReport& report) {
  nlohmann::ordered_json metrics;
  for (const auto& [name, field] : metric_fields()) {
    if ((report.*field).has_value())
      metrics[name] = *(report.*field);
    else
      metrics[name] = nullptr;
  }
  nlohmann::ordered_json j = {{"set_count", report.set_count},
                              {"metrics", metrics},
                              {"absent", report.absent},
                              {"conventions", report.conventions}};
  return j.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("metrics"))
    throw ValidationError("invalid metric report");
  MetricReport report;
  report.set_count = j.value("set_count", 0);
  const auto& metrics = j.at("metrics");
  for (const auto& [name, field] : metric_fields()) {
    if (metrics.contains(name) && !metrics.at(name).is_null())
      report.*field = metrics.at(name).get<double>();
  }
  if (j.contains("absent"))
    report.absent = j.at("absent").get<std::map<std::string, std::string>>();
  if (j.contains("conventions"))
    report.conventions =
        j.at("conventions").get<std::map<std::string, std::string>>();
  return report;
}

namespace {

std::string fmt_cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

std::string report_table(const MetricReport& report) {
  std::ostringstream os;
  os << "metric             value\n";
  os << "-----------------  --------\n";
  for (const auto& [name, field] : metric_fields()) {
    if (std::string_view(name) == "nli" && !(report.*field).has_value())
      continue;  // NLI column only with precomputed scores
    os << name;
    for (std::size_t k = std::string_view(name).size(); k < 19; ++k) os << ' ';
    os << fmt_cell(report.*field) << '\n';
  }
  os << "sets               " << report.set_count << '\n';
  return os.str();
}

std::vector<MetricDelta> ablation_compare(const MetricReport& a,
                                          const MetricReport& b) {
  if (a.conventions != b.conventions)
    throw ValidationError("ablation_compare: reports use different conventions");
  std::vector<MetricDelta> out;
  for (const auto& [name, field] : metric_fields()) {
    MetricDelta d;
    d.metric = name;
    d.a = a.*field;
    d.b = b.*field;
    if (d.a && d.b) {
      d.delta = *d.b - *d.a;
      d.direction = *d.delta > 0 ? "up" : (*d.delta < 0 ? "down" : "flat");
    } else {
      d.direction = "absent";
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string delta_table(const std::vector<MetricDelta>& deltas) {
  std::ostringstream os;
  os << "metric             a         b         delta\n";
  os << "-----------------  --------  --------  ----------\n";
  for (const auto& d : deltas) {
    os << d.metric;
    for (std::size_t k = d.metric.size(); k < 19; ++k) os << ' ';
    const auto pad = [&](const std::string& s, std::size_t w) {
      os << s;
      for (std::size_t k = s.size(); k < w; ++k) os << ' ';
    };
    pad(fmt_cell(d.a), 10);
    pad(fmt_cell(d.b), 10);
    if (d.delta) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%+.2f", *d.delta);
      os << buf << (d.direction == "up" ? " ^" : (d.direction == "down" ? " v" : ""));
    } else {
      os << "-";
    }
    os << '\n';
  }
  return os.str();
}

Selection select_for_profile(const corpus::HeadlineSet& set,
                             const UserProfile& profile,
                             const embedding::EmbeddingProvider& provider) {
  if (set.headlines.empty())
    throw ValidationError("select_for_profile: empty headline set");
  embedding::EmbeddingVector pvec;
  if (profile.vector.has_value())
    pvec = *profile.vector;
  else if (!profile.text.empty())
    pvec = provider.embed(profile.text);
  else
    throw ValidationError("select_for_profile: profile " + profile.id +
                          " has neither text nor vector");
  Selection best;
  best.similarity = -2.0;
  for (std::size_t i = 0; i < set.headlines.size(); ++i) {
    const double sim = embedding::cosine(provider.embed(set.headlines[i]), pvec);
    if (sim > best.similarity) {
      best.similarity = sim;
      best.index = static_cast<int>(i);
      best.headline = set.headlines[i];
    }
  }
  return best;
}

}  // namespace adgen::harness
