// Acceptance suite: one check per release criterion, each printed as a
// single [PASS]/[FAIL] line with its runtime. Exits nonzero if any fails.
//
// usage: adgen_acceptance <path-to-cli> <fixtures-dir>

#include <bitset>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adgen/corpus.hpp"
#include "adgen/embedding.hpp"
#include "adgen/grpo.hpp"
#include "adgen/harness.hpp"
#include "adgen/pipeline.hpp"
#include "adgen/rewardmodels.hpp"
#include "adgen/rewards.hpp"
#include "adgen/style.hpp"
#include "adgen/text.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace corpus = adgen::corpus;
namespace embedding = adgen::embedding;
namespace grpo = adgen::grpo;
namespace models = adgen::models;
namespace pipeline = adgen::pipeline;
namespace rewards = adgen::rewards;
namespace style = adgen::style;
namespace text = adgen::text;

namespace {

std::string g_cli_path;
fs::path g_fixtures_dir;
fs::path g_work_dir;

struct CheckFailure {
  std::string message;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw CheckFailure{message};
}

// ----- helpers shared by several criteria -----

class TableScorer final : public rewards::Scorer {
 public:
  explicit TableScorer(std::unordered_map<std::string, double> table,
                       double fallback)
      : table_(std::move(table)), fallback_(fallback) {}
  double score(const std::string&, const std::string& headline) const override {
    const auto it = table_.find(headline);
    return it == table_.end() ? fallback_ : it->second;
  }

 private:
  std::unordered_map<std::string, double> table_;
  double fallback_;
};

class HashScorer final : public rewards::Scorer {
 public:
  double score(const std::string& content,
               const std::string& headline) const override {
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : content)
      h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    for (const char c : headline)
      h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    return static_cast<double>(h % 1000) / 999.0;
  }
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// The 64-candidate toy bank: 6 planted headlines with mutually disjoint
// tokens and six distinct styles, the rest filler with disjoint tokens and
// round-robin styles. The quality table scores planted high (1.0 down to
// 0.90) and filler 0.2; CTR is flat so quality is the only model-based
// pull toward the planted subset.
struct ToyBank {
  grpo::CandidateBank bank;
  std::vector<std::string> planted;
  std::unordered_map<std::string, double> quality_table;
};

ToyBank make_toy_bank() {
  ToyBank toy;
  const auto styles = style::all_styles();
  const std::vector<std::pair<std::string, int>> planted = {
      {"新品到底值不值得入手？", 2 * 4 + 0},   // direct, no emoji, question
      {"全场最抢手的爆款", 2 * 4 + 1},         // direct, no emoji, exaggeration
      {"用起来像开了挂", 2 * 4 + 2},           // direct, no emoji, metaphor
      {"实测体验报告出炉", 2 * 4 + 3},         // direct, no emoji, statement
      {"据说这波福利要没了？", 3 * 4 + 0},     // indirect, no emoji, question
      {"听说老粉都悄悄回购", 3 * 4 + 3},       // indirect, no emoji, statement
  };
  const double planted_scores[] = {1.0, 0.98, 0.96, 0.94, 0.92, 0.90};
  int idx = 0;
  for (const auto& [headline, style_index] : planted) {
    grpo::Candidate c;
    c.headline = headline;
    c.style = styles[static_cast<std::size_t>(style_index)];
    c.keyword = "kw" + std::to_string(idx);
    toy.bank.candidates.push_back(c);
    toy.planted.push_back(headline);
    toy.quality_table[headline] = planted_scores[idx];
    ++idx;
  }
  // Filler: distinct token per candidate so duplicates are the only
  // source of lexical overlap.
  static const std::vector<std::string> filler_tokens = {
      "山", "河", "湖", "海", "星", "云", "风", "雪", "林", "岩", "溪", "谷",
      "峰", "原", "岛", "湾", "沙", "漠", "洲", "港", "桥", "塔", "灯", "舟",
      "帆", "錨", "旗", "钟", "鼓", "琴", "棋", "书", "画", "笔", "墨", "纸",
      "砚", "瓷", "陶", "铜", "铁", "银", "玉", "珠", "贝", "绸", "缎", "麻",
      "棉", "竹", "松", "柏", "梅", "兰", "菊", "荷", "枫", "桂"};
  for (int i = 0; i < 58; ++i) {
    grpo::Candidate c;
    c.headline = filler_tokens[static_cast<std::size_t>(i)] + "间好物记录";
    c.style = styles[static_cast<std::size_t>(i % 16)];
    c.keyword = "f" + std::to_string(i);
    toy.quality_table[c.headline] = 0.2;
    toy.bank.candidates.push_back(std::move(c));
  }
  toy.bank.validate();
  return toy;
}

rewards::RewardConfig toy_reward_config() {
  rewards::RewardConfig rc;
  rc.target_count = 6;
  rc.quality_mode = rewards::QualityMode::mean_score;
  return rc;
}

struct PolicyEval {
  double composite_mean = 0.0;
  double pair_bleu_mean = 0.0;   // over eval sets, 0..1
  double style_cov_pooled = 0.0;  // distinct styles / 16 over all draws
  double quality_mean = 0.0;      // mean quality score over all headlines
};

PolicyEval evaluate_policy(const grpo::PolicyParams& policy,
                           const grpo::CandidateBank& bank,
                           const rewards::Scorer& quality,
                           const rewards::Scorer& ctr,
                           const rewards::RewardConfig& config, int n_eval,
                           std::uint64_t eval_seed) {
  std::mt19937_64 rng(eval_seed);
  PolicyEval out;
  std::bitset<16> pooled;
  long headline_rows = 0;
  for (int i = 0; i < n_eval; ++i) {
    const auto sampled = grpo::sample_set(policy, bank, config.target_count, rng);
    const auto rv = rewards::composite_reward("广告内容", sampled.set.raw_output,
                                              quality, ctr, config);
    out.composite_mean += rv.composite;
    out.pair_bleu_mean +=
        text::pair_bleu(text::tokenize_all(sampled.set.headlines), config.bleu);
    for (const auto& h : sampled.set.headlines) {
      pooled.set(style::style_index(style::classify_style(h, config.lexicon)));
      out.quality_mean += quality.score("广告内容", h);
      ++headline_rows;
    }
  }
  out.composite_mean /= n_eval;
  out.pair_bleu_mean /= n_eval;
  out.quality_mean /= static_cast<double>(headline_rows);
  out.style_cov_pooled = static_cast<double>(pooled.count()) / 16.0;
  return out;
}

// Greedy forward selection of a headline multiset maximizing the
// composite, used as the oracle for the optimization criterion.
double oracle_best_composite(const grpo::CandidateBank& bank,
                             const rewards::Scorer& quality,
                             const rewards::Scorer& ctr,
                             const rewards::RewardConfig& config) {
  std::vector<std::string> chosen;
  double best_total = 0.0;
  for (int slot = 0; slot < config.target_count; ++slot) {
    double best = -1.0;
    std::string best_headline;
    for (const auto& c : bank.candidates) {
      std::vector<std::string> trial = chosen;
      trial.push_back(c.headline);
      const auto rv = rewards::composite_reward(
          "广告内容", rewards::canonical_raw_output(trial), quality, ctr, config);
      if (rv.composite > best) {
        best = rv.composite;
        best_headline = c.headline;
      }
    }
    chosen.push_back(best_headline);
    best_total = best;
  }
  return best_total;
}

// ----- CLI helpers -----

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

int run_cli(const std::vector<std::string>& args, const fs::path& log_path) {
  std::string cmd = shell_quote(g_cli_path);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " > " + shell_quote(log_path.string()) + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<corpus::AdRecord> synthetic_ads(int n, std::uint64_t seed) {
  // Content drawn from marker-free vocabulary so that proposed keywords
  // never collide with the style lexicon.
  static const std::vector<std::string> vocab = {
      "碳", "板", "减", "震", "轻", "盈", "透", "气", "防", "滑", "耐", "磨",
      "速", "干", "保", "暖", "折", "叠", "便", "携", "智", "能", "静", "音",
      "续", "航", "高", "清", "广", "角", "防", "水"};
  std::mt19937_64 rng(seed);
  std::vector<corpus::AdRecord> ads;
  for (int i = 0; i < n; ++i) {
    corpus::AdRecord r;
    r.id = "ad-" + std::to_string(i);
    for (int k = 0; k < 14; ++k) r.content += vocab[rng() % vocab.size()];
    r.content += "好物" + std::to_string(i);
    r.original_title = "第" + std::to_string(i) + "期好物测评";
    r.topics = {"好物"};
    r.caption = "cap";
    r.taxonomy = "misc";
    r.timestamp = 1700000000 + i;
    ads.push_back(std::move(r));
  }
  return ads;
}

// ----- criteria -----

void criterion_metric_oracles() {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 200; ++i) {
    const auto cand = oracle::random_seq(rng, 12, 5);
    auto ref = oracle::random_seq(rng, 12, 5);
    if (ref.empty()) ref.push_back("t0");
    const int max_n = 1 + static_cast<int>(rng() % 4);

    const double got_bleu = text::bleu(cand, {ref}, {.max_n = max_n});
    const double want_bleu = oracle::bleu(cand, {ref}, max_n);
    require(std::abs(got_bleu - want_bleu) <= 1e-9,
            "bleu mismatch " + std::to_string(got_bleu) + " vs " +
                std::to_string(want_bleu));

    for (const int n : {1, 2}) {
      const auto got = text::rouge_n(cand, ref, n);
      const auto want = oracle::rouge_n(cand, ref, n);
      require(std::abs(got.precision - want.precision) <= 1e-9 &&
                  std::abs(got.recall - want.recall) <= 1e-9 &&
                  std::abs(got.f1 - want.f1) <= 1e-9,
              "rouge-" + std::to_string(n) + " mismatch");
    }
    const auto got_l = text::rouge_l(cand, ref);
    const auto want_l = oracle::rouge_l(cand, ref);
    require(got_l.precision == want_l.precision &&
                got_l.recall == want_l.recall && got_l.f1 == want_l.f1,
            "rouge-L mismatch (exact)");
  }
}

void criterion_reward_formulas() {
  require(rewards::quantity_reward(0, 6) == 0.0, "quantity(0,6)");
  require(rewards::quantity_reward(3, 6) == 0.5, "quantity(3,6)");
  require(rewards::quantity_reward(6, 6) == 1.0, "quantity(6,6)");
  require(rewards::quantity_reward(9, 6) == 1.0, "quantity(9,6)");

  require(models::margin_loss(std::vector{0.9}, std::vector{0.1}, 0.3) == 0.0,
          "margin(0.9,0.1)");
  require(std::abs(models::margin_loss(std::vector{0.5}, std::vector{0.45}, 0.3) -
                   0.25) <= 1e-15,
          "margin(0.5,0.45)");
  require(models::margin_loss(std::vector{0.6}, std::vector{0.6}, 0.3) == 0.3,
          "margin(equal)");

  // Diversity formula against componentwise recomputation.
  std::mt19937_64 rng(1002);
  static const std::vector<std::string> pool = {
      "跑", "鞋", "新", "品", "最", "像", "据", "说", "好", "用", "吗", "？",
      "🔥", "轻", "盈"};
  rewards::RewardConfig config;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> headlines;
    const int n = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      std::string h;
      const int len = 1 + static_cast<int>(rng() % 6);
      for (int k = 0; k < len; ++k) h += pool[rng() % pool.size()];
      headlines.push_back(std::move(h));
    }
    const double got = rewards::diversity_reward(headlines, config);
    const double pb = text::pair_bleu(text::tokenize_all(headlines), config.bleu);
    const double cov = style::coverage(headlines, config.lexicon);
    require(std::abs(got - (1.0 - pb + cov) / 2.0) <= 1e-15,
            "diversity formula mismatch");
  }
}

void criterion_reward_fuzz() {
  const HashScorer scorer;
  rewards::RewardConfig config;
  std::mt19937_64 rng(1003);
  for (int trial = 0; trial < 10000; ++trial) {
    std::string raw;
    const int kind = static_cast<int>(rng() % 3);
    const int len = static_cast<int>(rng() % 200);
    if (kind == 0) {  // arbitrary bytes
      for (int i = 0; i < len; ++i) raw.push_back(static_cast<char>(rng() % 256));
    } else if (kind == 1) {  // JSON-ish, sometimes truncated
      raw = "[";
      const int items = static_cast<int>(rng() % 6);
      for (int i = 0; i < items; ++i) {
        raw += i ? ",\"t" : "\"t";
        raw += std::to_string(rng() % 100) + "\"";
      }
      if (rng() % 3 != 0) raw += "]";
    } else {  // newline-separated text
      for (int i = 0; i < len; ++i) {
        const std::uint64_t r = rng() % 20;
        raw += r == 0 ? std::string("\n") : std::to_string(r);
      }
    }
    const auto rv = rewards::composite_reward("内容", raw, scorer, scorer, config);
    for (const double v : {rv.diversity, rv.quality, rv.ctr, rv.quantity,
                           rv.format, rv.composite}) {
      require(v >= 0.0 && v <= 1.0, "component out of [0,1]");
      require(std::isfinite(v), "non-finite component");
    }
    const double mean =
        (rv.diversity + rv.quality + rv.ctr + rv.quantity + rv.format) / 5.0;
    require(rv.composite == mean, "composite not the exact mean");
  }
}

void criterion_gradient_checks() {
  // BCE gradient.
  {
    std::mt19937_64 rng(1004);
    const int dim = 24;
    std::vector<corpus::LabeledQuality> data;
    static const std::vector<std::string> filler = {"跑", "鞋", "新", "品", "热"};
    for (int i = 0; i < 16; ++i) {
      std::string h = i % 2 ? "优质" : "普通";
      for (int k = 0; k < 3; ++k) h += filler[rng() % filler.size()];
      data.push_back({"内容", h, i % 2});
    }
    const auto examples = models::featurize_quality(data, dim);
    models::LinearModel m = models::zero_model(dim);
    for (auto& w : m.weights) w = uniform01(rng) * 2.0 - 1.0;
    m.bias = 0.25;
    std::vector<double> gw;
    double gb = 0.0;
    models::quality_loss_grad(m, examples, 0.01, &gw, &gb);
    std::vector<double> analytic = gw;
    analytic.push_back(gb);
    std::vector<double> params = m.weights;
    params.push_back(m.bias);
    const auto numeric = oracle::finite_difference(
        params, 1e-4, [&](const std::vector<double>& p) {
          models::LinearModel t = models::zero_model(dim);
          for (int i = 0; i < dim; ++i) t.weights[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
          t.bias = p.back();
          return models::quality_loss(t, examples, 0.01);
        });
    require(oracle::relative_error(analytic, numeric) < 1e-5,
            "BCE gradient error >= 1e-5");
  }

  // Margin-loss gradient, away from hinge kinks.
  {
    std::mt19937_64 rng(1005);
    const int dim = 24;
    static const std::vector<std::string> filler = {"跑", "鞋", "新", "品"};
    std::vector<corpus::CtrPair> pairs;
    for (int i = 0; i < 10; ++i) {
      std::string pos = "优", neg = "差";
      for (int k = 0; k < 3; ++k) {
        pos += filler[rng() % filler.size()];
        neg += filler[rng() % filler.size()];
      }
      pairs.push_back({"内容", pos, neg});
    }
    const auto examples = models::featurize_pairs(pairs, dim);
    int checked = 0;
    for (int attempt = 0; attempt < 60 && checked < 5; ++attempt) {
      models::LinearModel m = models::zero_model(dim);
      for (auto& w : m.weights) w = uniform01(rng) * 2.0 - 1.0;
      m.bias = uniform01(rng) - 0.5;
      bool near_kink = false;
      for (const auto& ex : examples) {
        const double gap = 0.3 - models::predict(m, ex.positive) +
                           models::predict(m, ex.negative);
        if (std::abs(gap) < 1e-3) near_kink = true;
      }
      if (near_kink) continue;
      std::vector<double> gw;
      double gb = 0.0;
      models::ctr_loss_grad(m, examples, 0.3, 0.0, &gw, &gb);
      std::vector<double> analytic = gw;
      analytic.push_back(gb);
      std::vector<double> params = m.weights;
      params.push_back(m.bias);
      const auto numeric = oracle::finite_difference(
          params, 1e-4, [&](const std::vector<double>& p) {
            models::LinearModel t = models::zero_model(dim);
            for (int i = 0; i < dim; ++i) t.weights[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
            t.bias = p.back();
            return models::ctr_loss(t, examples, 0.3, 0.0);
          });
      require(oracle::relative_error(analytic, numeric) < 1e-5,
              "margin gradient error >= 1e-5");
      ++checked;
    }
    require(checked >= 3, "too few kink-free margin configurations");
  }

  // GRPO surrogate gradient on 20 random 5-candidate configurations.
  {
    std::mt19937_64 rng(1006);
    for (int trial = 0; trial < 20; ++trial) {
      grpo::CandidateBank bank;
      const auto styles = style::all_styles();
      for (int i = 0; i < 5; ++i)
        bank.candidates.push_back({"候选" + std::to_string(i),
                                   styles[static_cast<std::size_t>(i)],
                                   "k" + std::to_string(i)});
      grpo::PolicyParams policy = grpo::make_policy(5);
      for (auto& v : policy.logits) v = uniform01(rng) * 2.0 - 1.0;
      for (auto& v : policy.reference_logits) v = uniform01(rng) * 2.0 - 1.0;
      std::vector<grpo::SampledSet> sets;
      for (int i = 0; i < 4; ++i)
        sets.push_back(grpo::sample_set(policy, bank, 3, rng));
      std::vector<double> adv(4);
      for (auto& a : adv) a = uniform01(rng) * 2.0 - 1.0;
      const double beta = 0.25;

      double loss = 0.0;
      std::vector<double> analytic;
      grpo::surrogate_loss_grad(policy, sets, adv, beta, &loss, &analytic);
      const auto numeric = oracle::finite_difference(
          policy.logits, 1e-5, [&](const std::vector<double>& logits) {
            grpo::PolicyParams p = policy;
            p.logits = logits;
            return grpo::surrogate_loss(p, sets, adv, beta);
          });
      require(oracle::relative_error(analytic, numeric) < 1e-4,
              "surrogate gradient error >= 1e-4");
    }
  }
}

void criterion_learnability() {
  // Quality classifier on linearly separable synthetic data.
  {
    std::mt19937_64 rng(1007);
    static const std::vector<std::string> filler = {"跑", "鞋", "新", "品",
                                                    "上", "市", "热", "卖"};
    std::vector<corpus::LabeledQuality> data;
    for (int i = 0; i < 200; ++i) {
      std::string h = i % 2 ? "优质" : "糟糕";
      const int len = 2 + static_cast<int>(rng() % 4);
      for (int k = 0; k < len; ++k) h += filler[rng() % filler.size()];
      data.push_back({"广告内容", h, i % 2});
    }
    models::TrainConfig config;
    config.learning_rate = 2.0;
    config.epochs = 500;
    config.batch_size = 200;
    config.seed = 11;
    const auto result = models::train_quality(data, config);
    const auto examples = models::featurize_quality(data);
    require(models::accuracy(result.model, examples) >= 0.95,
            "train accuracy below 0.95");
  }

  // CTR ranker separates held-out pairs with the planted token.
  {
    std::mt19937_64 rng(1008);
    static const std::vector<std::string> filler = {"跑", "鞋", "新", "品", "热"};
    const auto make_pairs = [&](int n) {
      std::vector<corpus::CtrPair> pairs;
      for (int i = 0; i < n; ++i) {
        std::string pos = "爆款", neg = "无聊";
        for (int k = 0; k < 3; ++k) {
          pos += filler[rng() % filler.size()];
          neg += filler[rng() % filler.size()];
        }
        pairs.push_back({"内容" + std::to_string(i % 7), pos, neg});
      }
      return pairs;
    };
    const auto train_pairs = make_pairs(120);
    const auto held_out = make_pairs(40);
    models::TrainConfig config;
    config.learning_rate = 2.0;
    config.epochs = 150;
    config.batch_size = 32;
    config.seed = 12;
    const auto result = models::train_ctr(train_pairs, config);
    double sep = 0.0;
    for (const auto& p : held_out)
      sep += models::predict(result.model, p.content, p.positive) -
             models::predict(result.model, p.content, p.negative);
    sep /= static_cast<double>(held_out.size());
    require(sep > 0.0, "held-out score separation not positive");
  }
}

void criterion_grpo_optimization() {
  const ToyBank toy = make_toy_bank();
  const TableScorer quality(toy.quality_table, 0.2);
  const rewards::ConstScorer ctr(0.6);
  const auto config = toy_reward_config();

  const double oracle_best = oracle_best_composite(toy.bank, quality, ctr, config);
  require(oracle_best > 0.85, "oracle best suspiciously low");

  grpo::GrpoConfig gc;
  gc.group_size = 8;
  gc.set_size = 6;
  gc.beta = 0.01;
  gc.learning_rate = 0.6;
  gc.steps = 300;
  gc.seed = 20240501;
  const grpo::RewardFn reward_fn = [&](const std::string& content,
                                       const std::string& raw) {
    return rewards::composite_reward(content, raw, quality, ctr, config);
  };
  const auto [policy, trace] = grpo::train({"广告内容"}, toy.bank, reward_fn, gc);
  const auto eval = evaluate_policy(policy, toy.bank, quality, ctr, config, 100,
                                    998877);
  require(eval.composite_mean >= 0.9 * oracle_best,
          "final composite " + std::to_string(eval.composite_mean) +
              " below 0.9 * oracle " + std::to_string(oracle_best));
}

void criterion_kl_contract() {
  std::mt19937_64 rng(1009);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t b = 2 + rng() % 12;
    grpo::PolicyParams p = grpo::make_policy(b);
    for (auto& v : p.logits) v = uniform01(rng) * 10.0 - 5.0;
    for (auto& v : p.reference_logits) v = uniform01(rng) * 10.0 - 5.0;
    require(grpo::kl_divergence(p) >= 0.0, "KL < 0");
  }
  {
    grpo::PolicyParams p = grpo::make_policy(7);
    for (std::size_t i = 0; i < 7; ++i) {
      p.logits[i] = 0.37 * static_cast<double>(i) - 1.1;
      p.reference_logits[i] = p.logits[i];
    }
    require(grpo::kl_divergence(p) <= 1e-12, "KL at equal logits > 1e-12");
  }

  // Penalty dominance: same seed, same step size; only beta differs. The
  // step size is chosen inside the stable region for beta = 1e3.
  const ToyBank toy = make_toy_bank();
  const HashScorer hash;
  rewards::RewardConfig rc = toy_reward_config();
  rc.target_count = 2;
  const grpo::RewardFn reward_fn = [&](const std::string& content,
                                       const std::string& raw) {
    return rewards::composite_reward(content, raw, hash, hash, rc);
  };
  grpo::GrpoConfig gc;
  gc.group_size = 8;
  gc.set_size = 2;
  gc.learning_rate = 0.004;
  gc.steps = 100;
  gc.seed = 4321;

  gc.beta = 0.0;
  const auto [p_free, t_free] = grpo::train({"内容"}, toy.bank, reward_fn, gc);
  gc.beta = 1e3;
  const auto [p_pinned, t_pinned] = grpo::train({"内容"}, toy.bank, reward_fn, gc);
  require(grpo::kl_divergence(p_pinned) < grpo::kl_divergence(p_free),
          "beta=1e3 run did not end with lower KL");
}

void criterion_ablation_directions() {
  const ToyBank toy = make_toy_bank();
  const TableScorer quality(toy.quality_table, 0.2);
  const rewards::ConstScorer ctr(0.6);
  const auto config = toy_reward_config();
  const grpo::RewardFn reward_fn = [&](const std::string& content,
                                       const std::string& raw) {
    return rewards::composite_reward(content, raw, quality, ctr, config);
  };
  const grpo::Objective full = grpo::composite_objective();
  const grpo::Objective wo_diversity = [](const rewards::RewardVector& rv) {
    return (rv.quality + rv.ctr + rv.quantity + rv.format) / 4.0;
  };
  const grpo::Objective wo_quality = [](const rewards::RewardVector& rv) {
    return (rv.diversity + rv.ctr + rv.quantity + rv.format) / 4.0;
  };

  double full_pb = 0.0, full_cov = 0.0, full_q = 0.0;
  double wod_pb = 0.0, wod_cov = 0.0;
  double woq_q = 0.0;
  const std::vector<std::uint64_t> seeds = {11, 22, 33, 44, 55};
  for (const std::uint64_t seed : seeds) {
    grpo::GrpoConfig gc;
    gc.group_size = 8;
    gc.set_size = 6;
    gc.beta = 0.01;
    gc.learning_rate = 0.6;
    gc.steps = 300;
    gc.seed = seed;

    const auto [p_full, t1] =
        grpo::train({"广告内容"}, toy.bank, reward_fn, gc, full);
    const auto e_full =
        evaluate_policy(p_full, toy.bank, quality, ctr, config, 64, seed + 1);
    full_pb += e_full.pair_bleu_mean;
    full_cov += e_full.style_cov_pooled;
    full_q += e_full.quality_mean;

    const auto [p_wod, t2] =
        grpo::train({"广告内容"}, toy.bank, reward_fn, gc, wo_diversity);
    const auto e_wod =
        evaluate_policy(p_wod, toy.bank, quality, ctr, config, 64, seed + 1);
    wod_pb += e_wod.pair_bleu_mean;
    wod_cov += e_wod.style_cov_pooled;

    const auto [p_woq, t3] =
        grpo::train({"广告内容"}, toy.bank, reward_fn, gc, wo_quality);
    const auto e_woq =
        evaluate_policy(p_woq, toy.bank, quality, ctr, config, 64, seed + 1);
    woq_q += e_woq.quality_mean;
  }
  const double n = static_cast<double>(seeds.size());
  full_pb /= n; full_cov /= n; full_q /= n;
  wod_pb /= n; wod_cov /= n; woq_q /= n;

  require(wod_pb >= full_pb,
          "w/o diversity did not raise PairBLEU (" + std::to_string(wod_pb) +
              " vs " + std::to_string(full_pb) + ")");
  require(wod_cov <= full_cov,
          "w/o diversity did not lower style coverage (" +
              std::to_string(wod_cov) + " vs " + std::to_string(full_cov) + ")");
  require(woq_q <= full_q,
          "w/o quality did not lower the mean quality score (" +
              std::to_string(woq_q) + " vs " + std::to_string(full_q) + ")");
}

void criterion_pipeline_closure() {
  const auto ads = synthetic_ads(50, 501);
  const fs::path dir = g_work_dir / "pipeline";
  fs::create_directories(dir);
  corpus::write_records(ads, dir / "ads.jsonl");

  require(run_cli({"--seed", "9", "pipeline", "generate", "--records",
                   (dir / "ads.jsonl").string(), "-k", "6", "--out",
                   (dir / "sets.jsonl").string(), "--out-quadruples",
                   (dir / "quads.jsonl").string()},
                  dir / "generate.log") == 0,
          "pipeline generate failed");
  require(run_cli({"pipeline", "verify", "--quadruples",
                   (dir / "quads.jsonl").string(), "--out",
                   (dir / "reports.jsonl").string()},
                  dir / "verify.log") == 0,
          "pipeline verify failed");
  require(run_cli({"pipeline", "assemble", "--sets", (dir / "sets.jsonl").string(),
                   "--records", (dir / "ads.jsonl").string(), "--out",
                   (dir / "sft.jsonl").string()},
                  dir / "assemble.log") == 0,
          "pipeline assemble failed");

  // 100% verify pass rate over the emitted quadruples.
  {
    std::ifstream in(dir / "reports.jsonl");
    std::string line;
    long rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      require(j.at("passed").get<bool>(), "a quadruple failed verification");
      ++rows;
    }
    require(rows == 300, "expected 6 verified quadruples per record, got " +
                             std::to_string(rows) + " total");
  }
  // 100% format reward on assembled outputs.
  {
    std::ifstream in(dir / "sft.jsonl");
    std::string line;
    long rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto [score, parsed] =
          rewards::format_reward(j.at("output").get<std::string>());
      require(score == 1.0, "assembled output failed the format check");
      ++rows;
    }
    require(rows == 50, "expected one training example per record");
  }
}

void criterion_cli_determinism() {
  const fs::path dir = g_work_dir / "determinism";
  fs::create_directories(dir);
  const auto ads = synthetic_ads(12, 502);
  corpus::write_records(ads, dir / "ads.jsonl");

  const ToyBank toy = make_toy_bank();
  grpo::save_bank(toy.bank, dir / "bank.jsonl");
  {
    std::ofstream cfg(dir / "grpo.cfg");
    cfg << "steps = 40\ngroup_size = 8\nset_size = 6\nbeta = 0.01\n"
        << "learning_rate = 0.6\nquality_mode = mean_score\n";
  }

  const auto run_twice = [&](const std::string& tag,
                             const std::function<std::vector<std::string>(
                                 const fs::path&)>& args_for,
                             const std::vector<std::string>& outputs) {
    for (const int round : {1, 2}) {
      const fs::path round_dir = dir / (tag + std::to_string(round));
      fs::create_directories(round_dir);
      require(run_cli(args_for(round_dir), round_dir / "run.log") == 0,
              tag + " run " + std::to_string(round) + " failed");
    }
    for (const auto& name : outputs) {
      require(slurp(dir / (tag + "1") / name) == slurp(dir / (tag + "2") / name),
              tag + " output " + name + " differs between runs");
    }
  };

  run_twice("grpo",
            [&](const fs::path& d) {
              return std::vector<std::string>{
                  "--seed", "7", "--config", (dir / "grpo.cfg").string(),
                  "train-grpo", "--bank", (dir / "bank.jsonl").string(),
                  "--records", (dir / "ads.jsonl").string(), "--out-policy",
                  (d / "policy.json").string(), "--out-trace",
                  (d / "trace.jsonl").string(), "--quality-const", "0.9",
                  "--ctr-const", "0.6"};
            },
            {"policy.json", "trace.jsonl"});

  run_twice("pipeline",
            [&](const fs::path& d) {
              return std::vector<std::string>{
                  "--seed", "5", "pipeline", "generate", "--records",
                  (dir / "ads.jsonl").string(), "-k", "6", "--out",
                  (d / "sets.jsonl").string(), "--out-quadruples",
                  (d / "quads.jsonl").string()};
            },
            {"sets.jsonl", "quads.jsonl"});

  // metrics runs on the pipeline output from the first round.
  const fs::path sets = dir / "pipeline1" / "sets.jsonl";
  run_twice("metrics",
            [&](const fs::path& d) {
              return std::vector<std::string>{
                  "metrics", "--sets", sets.string(), "--refs",
                  (dir / "ads.jsonl").string(), "--out",
                  (d / "report.json").string()};
            },
            {"report.json"});

  // The committed golden report must match a fresh run on the fixture
  // corpus byte for byte.
  const fs::path golden_dir = g_fixtures_dir;
  const fs::path report = dir / "golden_report.json";
  require(run_cli({"metrics", "--sets", (golden_dir / "golden_sets.jsonl").string(),
                   "--refs", (golden_dir / "golden_ads.jsonl").string(), "--out",
                   report.string()},
                  dir / "golden.log") == 0,
          "metrics on the golden fixtures failed");
  require(slurp(report) == slurp(golden_dir / "golden_report.json"),
          "metrics report differs from the committed golden file");
}

void criterion_serving_selection() {
  const embedding::HashedBigramProvider provider;
  std::mt19937_64 rng(1011);
  static const std::vector<std::string> pool = {
      "跑", "鞋", "新", "品", "热", "卖", "真", "好", "用", "吗", "露", "营",
      "咖", "啡", "机", "耳", "款", "星"};
  corpus::HeadlineSet set;
  set.ad_id = "serving";
  set.target_count = 30;
  for (int i = 0; i < 30; ++i) {
    std::string h;
    const int len = 3 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) h += pool[rng() % pool.size()];
    set.headlines.push_back(std::move(h));
  }
  set.raw_output = rewards::canonical_raw_output(set.headlines);

  for (int trial = 0; trial < 100; ++trial) {
    std::string text_profile;
    const int len = 3 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len; ++k) text_profile += pool[rng() % pool.size()];
    const adgen::harness::UserProfile profile{"u", text_profile, std::nullopt};
    const auto sel = adgen::harness::select_for_profile(set, profile, provider);

    const auto pvec = provider.embed(text_profile);
    int best = 0;
    double best_sim = -2.0;
    for (int i = 0; i < 30; ++i) {
      const double sim = embedding::cosine(
          provider.embed(set.headlines[static_cast<std::size_t>(i)]), pvec);
      if (sim > best_sim) {
        best_sim = sim;
        best = i;
      }
    }
    require(sel.index == best && sel.similarity == best_sim,
            "selection disagrees with the exhaustive argmax");
  }
}

struct Criterion {
  int id;
  const char* name;
  void (*run)();
  double budget_seconds;  // 0 = no budget
};

const Criterion kCriteria[] = {
    {1, "metric-oracle equivalence", criterion_metric_oracles, 5.0},
    {2, "reward formula fidelity", criterion_reward_formulas, 0.0},
    {3, "reward robustness fuzz", criterion_reward_fuzz, 30.0},
    {4, "gradient checks", criterion_gradient_checks, 0.0},
    {5, "reward-model learnability", criterion_learnability, 60.0},
    {6, "GRPO optimization vs oracle", criterion_grpo_optimization, 60.0},
    {7, "KL contract", criterion_kl_contract, 0.0},
    {8, "ablation directionality", criterion_ablation_directions, 0.0},
    {9, "pipeline closure", criterion_pipeline_closure, 5.0},
    {10, "CLI determinism", criterion_cli_determinism, 0.0},
    {11, "serving selection argmax", criterion_serving_selection, 0.0},
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <path-to-cli> <fixtures-dir>\n", argv[0]);
    return 2;
  }
  g_cli_path = argv[1];
  g_fixtures_dir = argv[2];
  g_work_dir = fs::temp_directory_path() / "adgen-acceptance";
  fs::remove_all(g_work_dir);
  fs::create_directories(g_work_dir);

  int failures = 0;
  for (const auto& c : kCriteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      c.run();
    } catch (const CheckFailure& f) {
      failure = f.message;
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (failure.empty() && c.budget_seconds > 0.0 && elapsed > c.budget_seconds)
      failure = "exceeded runtime budget of " +
                std::to_string(c.budget_seconds) + "s";
    if (failure.empty()) {
      std::printf("[PASS] %2d %-32s (%.2fs)\n", c.id, c.name, elapsed);
    } else {
      std::printf("[FAIL] %2d %-32s (%.2fs): %s\n", c.id, c.name, elapsed,
                  failure.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
