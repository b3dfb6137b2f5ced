#include "adgen/rewardmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "adgen/errors.hpp"
#include "adgen/parallel.hpp"
#include "adgen/text.hpp"
#include "adgen/unicode.hpp"

namespace adgen::models {

namespace {

constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t hash_token(std::uint64_t h, std::string_view tok) {
  for (const char c : tok) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t hash_ngram(char ns, std::string_view a, std::string_view b = {}) {
  std::uint64_t h = kFeatureHashSeed;
  h ^= static_cast<unsigned char>(ns);  // feature namespace byte
  h *= kFnvPrime;
  h = hash_token(h, a);
  if (!b.empty()) {
    h ^= 0x1F;
    h *= kFnvPrime;
    h = hash_token(h, b);
  }
  return h;
}

}  // namespace

FeatureVector raw_features(const std::string& content,
                           const std::string& headline, int dim) {
  if (headline.empty())
    throw std::invalid_argument("raw_features: headline must be non-empty");
  if (dim < 8) throw std::invalid_argument("raw_features: dim too small");
  FeatureVector f;
  f.values.assign(static_cast<std::size_t>(dim), 0.0);
  const auto buckets = static_cast<std::uint64_t>(dim - 4);

  const text::TokenSeq h_toks = text::tokenize(headline);
  const text::TokenSeq c_toks = text::tokenize(content);
  for (const auto& t : h_toks) f.values[hash_ngram('h', t) % buckets] += 1.0;
  for (std::size_t i = 0; i + 1 < h_toks.size(); ++i)
    f.values[hash_ngram('b', h_toks[i], h_toks[i + 1]) % buckets] += 1.0;
  for (const auto& t : c_toks) f.values[hash_ngram('c', t) % buckets] += 1.0;

  // Scalar slots at the tail.
  const std::unordered_set<std::string> c_set(c_toks.begin(), c_toks.end());
  double overlap = 0.0;
  if (!h_toks.empty()) {
    const std::unordered_set<std::string> h_set(h_toks.begin(), h_toks.end());
    long hit = 0;
    for (const auto& t : h_set) hit += c_set.count(t) ? 1 : 0;
    overlap = static_cast<double>(hit) / static_cast<double>(h_set.size());
  }
  f.values[static_cast<std::size_t>(dim - 4)] = static_cast<double>(h_toks.size());
  f.values[static_cast<std::size_t>(dim - 3)] = overlap;
  f.values[static_cast<std::size_t>(dim - 2)] =
      uni::contains_emoji(headline) ? 1.0 : 0.0;
  f.values[static_cast<std::size_t>(dim - 1)] =
      uni::contains_question_mark(headline) ? 1.0 : 0.0;
  return f;
}

FeatureVector extract_features(const std::string& content,
                               const std::string& headline, int dim) {
  FeatureVector f = raw_features(content, headline, dim);
  double norm = 0.0;
  for (const double x : f.values) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& x : f.values) x /= norm;
  return f;
}

LinearModel zero_model(int dim) {
  LinearModel m;
  m.dim = dim;
  m.weights.assign(static_cast<std::size_t>(dim), 0.0);
  return m;
}

namespace {

double logistic(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

double dot_plus_bias(const LinearModel& m, const FeatureVector& f) {
  if (m.dim != f.dim())
    throw std::invalid_argument("predict: feature dimension mismatch");
  double z = m.bias;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    z += m.weights[i] * f.values[i];
  return z;
}

// Numerically stable BCE for label y given the pre-activation z:
// log(1 + e^z) - y*z.
double bce_from_logit(double z, int y) {
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z))
                                  : std::log1p(std::exp(z));
  return softplus - static_cast<double>(y) * z;
}

}  // namespace

double predict(const LinearModel& model, const FeatureVector& features) {
  // The raw logistic rounds to exactly 0 or 1 once |z| is large enough;
  // scores stay inside the open interval.
  const double p = logistic(dot_plus_bias(model, features));
  return std::clamp(p, std::numeric_limits<double>::min(),
                    1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

double predict(const LinearModel& model, const std::string& content,
               const std::string& headline) {
  return predict(model, extract_features(content, headline, model.dim));
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  nlohmann::ordered_json j = {{"format", "adgen-linear-model"},
                              {"schema_version", model.schema_version},
                              {"dim", model.dim},
                              {"hash_seed", model.hash_seed},
                              {"bias", model.bias},
                              {"weights", model.weights}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid model file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "adgen-linear-model")
    throw ValidationError("not a model file: " + path.string());
  LinearModel m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    m.dim = j.at("dim").get<int>();
    m.hash_seed = j.at("hash_seed").get<std::uint64_t>();
    m.bias = j.at("bias").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid model file " + path.string() + ": " + e.what());
  }
  if (static_cast<int>(m.weights.size()) != m.dim)
    throw ValidationError("model file weight count does not match dim");
  if (m.hash_seed != kFeatureHashSeed || m.schema_version != kFeatureSchemaVersion)
    throw ValidationError("model file uses an incompatible feature schema");
  return m;
}

std::vector<QualityExample> featurize_quality(
    const std::vector<corpus::LabeledQuality>& data, int dim) {
  std::vector<QualityExample> out(data.size());
  par::for_index(static_cast<long>(data.size()), 64, [&](long i) {
    const auto& d = data[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {
        extract_features(d.content, d.headline, dim), d.label};
  });
  return out;
}

double quality_loss(const LinearModel& model,
                    std::span<const QualityExample> examples, double l2) {
  if (examples.empty())
    throw std::invalid_argument("quality_loss: no examples");
  double acc = 0.0;
  for (const auto& ex : examples)
    acc += bce_from_logit(dot_plus_bias(model, ex.features), ex.label);
  double reg = 0.0;
  for (const double w : model.weights) reg += w * w;
  return acc / static_cast<double>(examples.size()) + l2 * reg;
}

void quality_loss_grad(const LinearModel& model,
                       std::span<const QualityExample> examples, double l2,
                       std::vector<double>* grad_weights, double* grad_bias) {
  grad_weights->assign(model.weights.size(), 0.0);
  *grad_bias = 0.0;
  for (const auto& ex : examples) {
    const double err =
        logistic(dot_plus_bias(model, ex.features)) - ex.label;
    for (std::size_t i = 0; i < ex.features.values.size(); ++i)
      (*grad_weights)[i] += err * ex.features.values[i];
    *grad_bias += err;
  }
  const double inv = 1.0 / static_cast<double>(examples.size());
  for (std::size_t i = 0; i < grad_weights->size(); ++i)
    (*grad_weights)[i] = (*grad_weights)[i] * inv + 2.0 * l2 * model.weights[i];
  *grad_bias *= inv;
}

double accuracy(const LinearModel& model,
                std::span<const QualityExample> examples) {
  if (examples.empty()) return 0.0;
  long hit = 0;
  for (const auto& ex : examples) {
    const int pred = predict(model, ex.features) >= 0.5 ? 1 : 0;
    hit += pred == ex.label ? 1 : 0;
  }
  return static_cast<double>(hit) / static_cast<double>(examples.size());
}

namespace {

// Shared mini-batch descent loop. step(indices, batch) applies one update;
// full_loss() is recorded at the end of each epoch.
template <class Step, class FullLoss>
std::vector<double> descend(std::size_t n_examples, const TrainConfig& config,
                            Step&& step, FullLoss&& full_loss) {
  if (config.epochs < 1)
    throw std::invalid_argument("train: epochs must be >= 1");
  if (config.batch_size < 1)
    throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(config.learning_rate > 0.0))
    throw std::invalid_argument("train: learning_rate must be positive");
  std::vector<std::size_t> order(n_examples);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t off = 0; off < n_examples;
         off += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(n_examples, off + static_cast<std::size_t>(config.batch_size));
      step(std::span<const std::size_t>(order.data() + off, end - off));
    }
    trace.push_back(full_loss());
  }
  return trace;
}

}  // namespace

TrainResult train_quality(const std::vector<corpus::LabeledQuality>& data,
                          const TrainConfig& config, int dim) {
  bool has_pos = false, has_neg = false;
  for (const auto& d : data) (d.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw ValidationError("train_quality: both classes must be present");

  const std::vector<QualityExample> examples = featurize_quality(data, dim);
  TrainResult result;
  result.model = zero_model(dim);
  LinearModel& m = result.model;
  std::vector<double> gw;
  double gb = 0.0;
  result.loss_trace = descend(
      examples.size(), config,
      [&](std::span<const std::size_t> idx) {
        std::vector<QualityExample> batch;
        batch.reserve(idx.size());
        for (const std::size_t i : idx) batch.push_back(examples[i]);
        quality_loss_grad(m, batch, config.l2, &gw, &gb);
        for (std::size_t i = 0; i < m.weights.size(); ++i)
          m.weights[i] -= config.learning_rate * gw[i];
        m.bias -= config.learning_rate * gb;
      },
      [&] { return quality_loss(m, examples, config.l2); });
  return result;
}

double margin_loss(std::span<const double> pos_scores,
                   std::span<const double> neg_scores, double margin) {
  if (pos_scores.size() != neg_scores.size())
    throw std::invalid_argument("margin_loss: score vectors differ in length");
  if (pos_scores.empty())
    throw std::invalid_argument("margin_loss: need at least one pair");
  double acc = 0.0;
  for (std::size_t i = 0; i < pos_scores.size(); ++i)
    acc += std::max(0.0, margin - pos_scores[i] + neg_scores[i]);
  return acc / static_cast<double>(pos_scores.size());
}

std::vector<PairExample> featurize_pairs(const std::vector<corpus::CtrPair>& pairs,
                                         int dim) {
  std::vector<PairExample> out(pairs.size());
  par::for_index(static_cast<long>(pairs.size()), 64, [&](long i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {
        extract_features(p.content, p.positive, dim),
        extract_features(p.content, p.negative, dim)};
  });
  return out;
}

double ctr_loss(const LinearModel& model, std::span<const PairExample> pairs,
                double margin, double l2) {
  if (pairs.empty()) throw std::invalid_argument("ctr_loss: no pairs");
  double acc = 0.0;
  for (const auto& p : pairs) {
    // Unclamped, so the loss matches ctr_loss_grad exactly.
    const double sp = logistic(dot_plus_bias(model, p.positive));
    const double sn = logistic(dot_plus_bias(model, p.negative));
    acc += std::max(0.0, margin - sp + sn);
  }
  double reg = 0.0;
  for (const double w : model.weights) reg += w * w;
  return acc / static_cast<double>(pairs.size()) + l2 * reg;
}

void ctr_loss_grad(const LinearModel& model, std::span<const PairExample> pairs,
                   double margin, double l2, std::vector<double>* grad_weights,
                   double* grad_bias) {
  grad_weights->assign(model.weights.size(), 0.0);
  *grad_bias = 0.0;
  for (const auto& p : pairs) {
    const double zp = dot_plus_bias(model, p.positive);
    const double zn = dot_plus_bias(model, p.negative);
    const double sp = logistic(zp);
    const double sn = logistic(zn);
    if (margin - sp + sn <= 0.0) continue;  // hinge inactive
    const double dp = sp * (1.0 - sp);
    const double dn = sn * (1.0 - sn);
    for (std::size_t i = 0; i < grad_weights->size(); ++i) {
      (*grad_weights)[i] +=
          -dp * p.positive.values[i] + dn * p.negative.values[i];
    }
    *grad_bias += -dp + dn;
  }
  const double inv = 1.0 / static_cast<double>(pairs.size());
  for (std::size_t i = 0; i < grad_weights->size(); ++i)
    (*grad_weights)[i] = (*grad_weights)[i] * inv + 2.0 * l2 * model.weights[i];
  *grad_bias *= inv;
}

TrainResult train_ctr(const std::vector<corpus::CtrPair>& pairs,
                      const TrainConfig& config, int dim) {
  if (pairs.empty()) throw ValidationError("train_ctr: no pairs");
  const std::vector<PairExample> examples = featurize_pairs(pairs, dim);
  TrainResult result;
  result.model = zero_model(dim);
  LinearModel& m = result.model;
  std::vector<double> gw;
  double gb = 0.0;
  result.loss_trace = descend(
      examples.size(), config,
      [&](std::span<const std::size_t> idx) {
        std::vector<PairExample> batch;
        batch.reserve(idx.size());
        for (const std::size_t i : idx) batch.push_back(examples[i]);
        ctr_loss_grad(m, batch, config.margin, config.l2, &gw, &gb);
        for (std::size_t i = 0; i < m.weights.size(); ++i)
          m.weights[i] -= config.learning_rate * gw[i];
        m.bias -= config.learning_rate * gb;
      },
      [&] { return ctr_loss(m, examples, config.margin, config.l2); });
  return result;
}

MineResult mine_ctr_pairs(const std::vector<corpus::InteractionLog>& logs) {
  for (std::size_t i = 0; i < logs.size(); ++i) {
    try {
      corpus::validate(logs[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("log row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  // Group by content in first-appearance order.
  std::vector<std::string> contents;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<const corpus::InteractionLog*>> groups;
  for (const auto& row : logs) {
    auto [it, inserted] = index.emplace(row.content, groups.size());
    if (inserted) {
      contents.push_back(row.content);
      groups.emplace_back();
    }
    groups[it->second].push_back(&row);
  }

  MineResult result;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& rows = groups[g];
    if (rows.size() < 3) {
      ++result.skipped_contents;
      continue;
    }
    const auto ctr = [](const corpus::InteractionLog* r) {
      return static_cast<double>(r->clicks) / static_cast<double>(r->impressions);
    };
    std::sort(rows.begin(), rows.end(),
              [&](const corpus::InteractionLog* a, const corpus::InteractionLog* b) {
                const double ca = ctr(a), cb = ctr(b);
                if (ca != cb) return ca > cb;
                return a->headline < b->headline;
              });
    const std::size_t third = rows.size() / 3;
    for (std::size_t i = 0; i < third; ++i) {
      for (std::size_t j = rows.size() - third; j < rows.size(); ++j) {
        if (ctr(rows[i]) <= ctr(rows[j])) continue;  // boundary tie
        if (rows[i]->headline == rows[j]->headline) continue;
        result.pairs.push_back(
            {contents[g], rows[i]->headline, rows[j]->headline});
      }
    }
  }
  return result;
}

FrozenTableScorer FrozenTableScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score file: " + path.string());
  FrozenTableScorer s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("headline") ||
        !j.contains("score"))
      throw ValidationError("score file line " + std::to_string(lineno) +
                            ": expected {\"headline\", \"score\"}");
    const auto headline = j.at("headline").get<std::string>();
    const double score = j.at("score").get<double>();
    if (!(score >= 0.0 && score <= 1.0))
      throw ValidationError("score file line " + std::to_string(lineno) +
                            ": field 'score': must be in [0, 1]");
    if (j.contains("content")) {
      s.by_pair_[j.at("content").get<std::string>() + '\x1F' + headline] = score;
    } else {
      s.by_headline_[headline] = score;
    }
  }
  return s;
}

double FrozenTableScorer::score(const std::string& content,
                                const std::string& headline) const {
  if (const auto it = by_pair_.find(content + '\x1F' + headline);
      it != by_pair_.end())
    return it->second;
  if (const auto it = by_headline_.find(headline); it != by_headline_.end())
    return it->second;
  throw ValidationError("score table has no entry for headline: " + headline);
}

}  // namespace adgen::models
