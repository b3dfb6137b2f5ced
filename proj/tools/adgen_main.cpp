// Command-line front end: scoring, metric reports, reward-model training,
// policy training, the data pipeline, serving-time selection, and corpus
// splitting. Every subcommand is deterministic under a fixed --seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adgen/config.hpp"
#include "adgen/corpus.hpp"
#include "adgen/embedding.hpp"
#include "adgen/errors.hpp"
#include "adgen/grpo.hpp"
#include "adgen/harness.hpp"
#include "adgen/pipeline.hpp"
#include "adgen/rewardmodels.hpp"
#include "adgen/rewards.hpp"
#include "adgen/style.hpp"

namespace {

namespace corpus = adgen::corpus;
namespace embedding = adgen::embedding;
namespace grpo = adgen::grpo;
namespace harness = adgen::harness;
namespace models = adgen::models;
namespace pipeline = adgen::pipeline;
namespace rewards = adgen::rewards;
namespace style = adgen::style;
using adgen::config::KeyValueConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// ----- shared option bundles -----

struct ScorerOptions {
  std::string model_path;
  std::string scores_path;
  double const_value = 0.5;

  std::unique_ptr<rewards::Scorer> build() const {
    if (!model_path.empty() && !scores_path.empty())
      throw adgen::ValidationError(
          "give either a model file or a score table, not both");
    if (!model_path.empty())
      return std::make_unique<models::LinearModelScorer>(
          models::load_model(model_path));
    if (!scores_path.empty())
      return std::make_unique<models::FrozenTableScorer>(
          models::FrozenTableScorer::load(scores_path));
    return std::make_unique<rewards::ConstScorer>(const_value);
  }
};

void add_scorer_options(CLI::App* cmd, const std::string& name,
                        ScorerOptions* opts) {
  cmd->add_option("--" + name + "-model", opts->model_path,
                  "trained linear model file for the " + name + " scorer");
  cmd->add_option("--" + name + "-scores", opts->scores_path,
                  "frozen score table (JSONL) for the " + name + " scorer");
  cmd->add_option("--" + name + "-const", opts->const_value,
                  "constant " + name + " score when no model is given")
      ->check(CLI::Range(0.0, 1.0));
}

struct CommonState {
  std::string config_path;
  std::string lexicon_path;
  std::uint64_t seed = 0;
  bool seed_given = false;

  KeyValueConfig config() const {
    if (config_path.empty()) return {};
    return KeyValueConfig::load(config_path);
  }
  style::StyleLexicon lexicon() const {
    if (lexicon_path.empty()) return style::default_lexicon();
    return style::load_lexicon(lexicon_path);
  }
};

rewards::RewardConfig reward_config_from(const KeyValueConfig& cfg,
                                         const style::StyleLexicon& lexicon) {
  rewards::RewardConfig rc;
  rc.target_count = static_cast<int>(cfg.get_long("target_count", rc.target_count));
  rc.faithfulness_threshold =
      cfg.get_double("faithfulness_threshold", rc.faithfulness_threshold);
  const std::string mode =
      cfg.get_string("quality_mode", "threshold_proportion");
  if (mode == "threshold_proportion")
    rc.quality_mode = rewards::QualityMode::threshold_proportion;
  else if (mode == "mean_score")
    rc.quality_mode = rewards::QualityMode::mean_score;
  else
    throw adgen::ValidationError("config key 'quality_mode': unknown value " +
                                 mode);
  rc.bleu.max_n = static_cast<int>(cfg.get_long("bleu_max_n", rc.bleu.max_n));
  if (rc.bleu.max_n < 1 || rc.bleu.max_n > 4)
    throw adgen::ValidationError("config key 'bleu_max_n': must be in 1..4");
  const std::string smoothing = cfg.get_string("bleu_smoothing", "off");
  if (smoothing != "off" && smoothing != "on")
    throw adgen::ValidationError("config key 'bleu_smoothing': on or off");
  rc.bleu.smooth = smoothing == "on";
  rc.lexicon = lexicon;
  return rc;
}

models::TrainConfig train_config_from(const KeyValueConfig& cfg,
                                      const CommonState& state) {
  models::TrainConfig tc;
  tc.learning_rate = cfg.get_double("learning_rate", tc.learning_rate);
  tc.epochs = static_cast<int>(cfg.get_long("epochs", tc.epochs));
  tc.batch_size = static_cast<int>(cfg.get_long("batch_size", tc.batch_size));
  tc.seed = cfg.get_uint64("seed", tc.seed);
  tc.l2 = cfg.get_double("l2", tc.l2);
  tc.margin = cfg.get_double("margin", tc.margin);
  if (state.seed_given) tc.seed = state.seed;
  return tc;
}

grpo::GrpoConfig grpo_config_from(const KeyValueConfig& cfg,
                                  const CommonState& state) {
  grpo::GrpoConfig gc;
  gc.group_size = static_cast<int>(cfg.get_long("group_size", gc.group_size));
  gc.set_size = static_cast<int>(cfg.get_long("set_size", gc.set_size));
  gc.beta = cfg.get_double("beta", gc.beta);
  gc.learning_rate = cfg.get_double("learning_rate", gc.learning_rate);
  gc.steps = static_cast<int>(cfg.get_long("steps", gc.steps));
  gc.seed = cfg.get_uint64("seed", gc.seed);
  gc.advantage_epsilon =
      cfg.get_double("advantage_epsilon", gc.advantage_epsilon);
  if (state.seed_given) gc.seed = state.seed;
  return gc;
}

std::unique_ptr<embedding::EmbeddingProvider> provider_from(
    const std::string& embeddings_path) {
  if (embeddings_path.empty())
    return std::make_unique<embedding::HashedBigramProvider>();
  return std::make_unique<embedding::FileBackedProvider>(
      embedding::FileBackedProvider::load(embeddings_path));
}

std::unordered_map<std::string, const corpus::AdRecord*> index_records(
    const std::vector<corpus::AdRecord>& records) {
  std::unordered_map<std::string, const corpus::AdRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  return by_id;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw adgen::IoError("cannot write file: " + path.string());
  out << text;
  out.flush();
  if (!out) throw adgen::IoError("write failed: " + path.string());
}

// ----- subcommands -----

int run_score(const CommonState& state, const std::string& sets_path,
              const std::string& records_path, const ScorerOptions& quality,
              const ScorerOptions& ctr, const std::string& out_path) {
  const auto cfg = state.config();
  cfg.require_known({"target_count", "faithfulness_threshold", "quality_mode",
                     "bleu_max_n", "bleu_smoothing"});
  const auto reward_config = reward_config_from(cfg, state.lexicon());
  const auto sets = corpus::read_records<corpus::HeadlineSet>(sets_path);
  const auto records = corpus::read_records<corpus::AdRecord>(records_path);
  const auto by_id = index_records(records);

  std::vector<std::pair<std::string, std::string>> batch;
  batch.reserve(sets.size());
  for (const auto& s : sets) {
    const auto it = by_id.find(s.ad_id);
    if (it == by_id.end())
      throw adgen::ValidationError("no record for ad_id " + s.ad_id);
    batch.emplace_back(it->second->content, s.raw_output);
  }
  const auto quality_scorer = quality.build();
  const auto ctr_scorer = ctr.build();
  const auto scored =
      rewards::score_batch(batch, *quality_scorer, *ctr_scorer, reward_config);

  std::string lines;
  double mean = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto& rv = scored[i];
    nlohmann::ordered_json j = {
        {"ad_id", sets[i].ad_id},   {"diversity", rv.diversity},
        {"quality", rv.quality},    {"ctr", rv.ctr},
        {"quantity", rv.quantity},  {"format", rv.format},
        {"composite", rv.composite}};
    lines += j.dump() + "\n";
    mean += rv.composite;
    std::printf("%s  composite %.6f\n", sets[i].ad_id.c_str(), rv.composite);
  }
  if (!scored.empty()) mean /= static_cast<double>(scored.size());
  std::printf("mean composite %.6f over %zu sets\n", mean, scored.size());
  if (!out_path.empty()) write_text(out_path, lines);
  return kExitOk;
}

int run_metrics(const CommonState& state, const std::string& sets_path,
                const std::string& refs_path, const std::string& embeddings_path,
                const std::string& nli_path, const std::string& out_path) {
  const auto cfg = state.config();
  cfg.require_known({"bleu_max_n", "bleu_smoothing"});
  harness::EvalConfig eval;
  eval.bleu.max_n = static_cast<int>(cfg.get_long("bleu_max_n", eval.bleu.max_n));
  eval.bleu.smooth = cfg.get_string("bleu_smoothing", "off") == "on";
  eval.lexicon = state.lexicon();

  const auto sets = corpus::read_records<corpus::HeadlineSet>(sets_path);
  const auto records = corpus::read_records<corpus::AdRecord>(refs_path);
  std::vector<std::pair<std::string, std::string>> refs;
  refs.reserve(records.size());
  for (const auto& r : records) refs.emplace_back(r.id, r.original_title);

  if (!nli_path.empty()) {
    std::ifstream in(nli_path);
    if (!in) throw adgen::IoError("cannot open NLI score file: " + nli_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("ad_id") || !j.contains("headline") ||
          !j.contains("score"))
        throw adgen::ValidationError("NLI score file line " +
                                     std::to_string(lineno) +
                                     ": expected {ad_id, headline, score}");
      eval.nli_scores[{j.at("ad_id").get<std::string>(),
                       j.at("headline").get<std::string>()}] =
          j.at("score").get<double>();
    }
    eval.use_nli = true;
  }

  const auto provider = provider_from(embeddings_path);
  const auto report = harness::evaluate_sets(sets, refs, *provider, eval);
  std::fputs(harness::report_table(report).c_str(), stdout);
  if (!out_path.empty()) write_text(out_path, harness::report_to_json(report));
  return kExitOk;
}

int run_train_quality(const CommonState& state, const std::string& data_path,
                      const std::string& out_path) {
  const auto cfg = state.config();
  cfg.require_known(
      {"learning_rate", "epochs", "batch_size", "seed", "l2", "margin"});
  const auto data = corpus::read_records<corpus::LabeledQuality>(data_path);
  const auto result = models::train_quality(data, train_config_from(cfg, state));
  models::save_model(result.model, out_path);
  const auto examples = models::featurize_quality(data);
  std::printf("trained on %zu examples, final loss %.6f, train accuracy %.4f\n",
              data.size(), result.loss_trace.back(),
              models::accuracy(result.model, examples));
  return kExitOk;
}

int run_train_ctr(const CommonState& state, const std::string& pairs_path,
                  const std::string& out_path) {
  const auto cfg = state.config();
  cfg.require_known(
      {"learning_rate", "epochs", "batch_size", "seed", "l2", "margin"});
  const auto pairs = corpus::read_records<corpus::CtrPair>(pairs_path);
  const auto result = models::train_ctr(pairs, train_config_from(cfg, state));
  models::save_model(result.model, out_path);
  std::printf("trained on %zu pairs, final loss %.6f\n", pairs.size(),
              result.loss_trace.back());
  return kExitOk;
}

int run_mine_pairs(const std::string& logs_path, const std::string& out_path) {
  const auto logs = corpus::read_records<corpus::InteractionLog>(logs_path);
  const auto result = models::mine_ctr_pairs(logs);
  corpus::write_records(result.pairs, out_path);
  std::printf("mined %zu pairs, skipped %d contents with fewer than 3 headlines\n",
              result.pairs.size(), result.skipped_contents);
  return kExitOk;
}

int run_train_grpo(const CommonState& state, const std::string& bank_path,
                   const std::string& records_path, const ScorerOptions& quality,
                   const ScorerOptions& ctr, const std::string& policy_path,
                   const std::string& trace_path) {
  const auto cfg = state.config();
  cfg.require_known({"group_size", "set_size", "beta", "learning_rate", "steps",
                     "seed", "advantage_epsilon", "target_count",
                     "faithfulness_threshold", "quality_mode", "bleu_max_n",
                     "bleu_smoothing"});
  const auto grpo_config = grpo_config_from(cfg, state);
  auto reward_config = reward_config_from(cfg, state.lexicon());
  if (!cfg.has("target_count")) reward_config.target_count = grpo_config.set_size;

  const auto bank = grpo::load_bank(bank_path);
  const auto records = corpus::read_records<corpus::AdRecord>(records_path);
  std::vector<std::string> contents;
  contents.reserve(records.size());
  for (const auto& r : records) contents.push_back(r.content);

  const auto quality_scorer = quality.build();
  const auto ctr_scorer = ctr.build();
  const grpo::RewardFn reward_fn = [&](const std::string& content,
                                       const std::string& raw) {
    return rewards::composite_reward(content, raw, *quality_scorer, *ctr_scorer,
                                     reward_config);
  };

  const auto [policy, trace] = grpo::train(contents, bank, reward_fn, grpo_config);
  grpo::save_policy(policy, policy_path);
  if (!trace_path.empty()) grpo::save_trace(trace, trace_path);
  std::printf("trained %d steps; final composite %.6f, kl %.6f\n",
              grpo_config.steps, trace.steps.back().reward_means.composite,
              trace.steps.back().kl);
  return kExitOk;
}

int run_pipeline(const CommonState& state, const std::string& stage,
                 const std::string& records_path, const std::string& quads_path,
                 const std::string& sets_path, const std::string& templates_path,
                 const std::string& stop_tokens_path, int k,
                 const std::string& out_path,
                 const std::string& out_quadruples_path) {
  const auto lexicon = state.lexicon();
  const auto templates = templates_path.empty()
                             ? pipeline::TemplateSet::defaults()
                             : pipeline::TemplateSet::load(templates_path);
  const auto stops = stop_tokens_path.empty()
                         ? pipeline::default_stop_tokens()
                         : pipeline::load_stop_tokens(stop_tokens_path);

  const auto make_proposer = [&](const std::vector<corpus::AdRecord>& records) {
    pipeline::KeywordProposer proposer(stops);
    proposer.add_corpus(records);
    return proposer;
  };

  if (stage == "enrich") {
    const auto records = corpus::read_records<corpus::AdRecord>(records_path);
    const auto result = pipeline::enrich(records, make_proposer(records), lexicon);
    corpus::write_records(result.quadruples, out_path);
    std::printf("enriched %zu records into quadruples, skipped %d\n",
                result.quadruples.size(), result.skipped);
    return kExitOk;
  }
  if (stage == "keywords") {
    const auto records = corpus::read_records<corpus::AdRecord>(records_path);
    const auto proposer = make_proposer(records);
    std::string lines;
    for (const auto& r : records) {
      const auto proposal = proposer.propose(r.original_title + " " + r.content, k);
      nlohmann::ordered_json j = {{"ad_id", r.id},
                                  {"keywords", proposal.keywords},
                                  {"shortfall", proposal.shortfall}};
      lines += j.dump() + "\n";
    }
    write_text(out_path, lines);
    std::printf("proposed keywords for %zu records\n", records.size());
    return kExitOk;
  }
  if (stage == "generate") {
    const auto records = corpus::read_records<corpus::AdRecord>(records_path);
    const auto result = pipeline::build_sets(records, k, templates,
                                             make_proposer(records), lexicon,
                                             state.seed);
    corpus::write_records(result.sets, out_path);
    if (!out_quadruples_path.empty())
      corpus::write_records(result.quadruples, out_quadruples_path);
    std::printf("generated %zu sets (%zu verified headlines, %d rejected)\n",
                result.sets.size(), result.quadruples.size(), result.rejected);
    return kExitOk;
  }
  if (stage == "verify") {
    const auto quadruples = corpus::read_records<corpus::Quadruple>(quads_path);
    std::string lines;
    long passed = 0;
    for (const auto& q : quadruples) {
      const auto report = pipeline::verify(q, lexicon);
      nlohmann::ordered_json j = {{"ad_id", q.ad_id},
                                  {"keyword_ok", report.keyword_ok},
                                  {"style_ok", report.style_ok},
                                  {"passed", report.passed}};
      lines += j.dump() + "\n";
      passed += report.passed ? 1 : 0;
    }
    write_text(out_path, lines);
    std::printf("verified %zu quadruples, %ld passed\n", quadruples.size(), passed);
    return kExitOk;
  }
  if (stage == "assemble") {
    const auto sets = corpus::read_records<corpus::HeadlineSet>(sets_path);
    const auto records = corpus::read_records<corpus::AdRecord>(records_path);
    const auto examples = pipeline::assemble_sft_dataset(sets, records);
    pipeline::write_sft_dataset(examples, out_path);
    std::printf("assembled %zu training examples\n", examples.size());
    return kExitOk;
  }
  throw CLI::ValidationError("stage",
                             "unknown stage '" + stage +
                                 "' (enrich|keywords|generate|verify|assemble)");
}

int run_compare(const std::string& report_a_path, const std::string& report_b_path,
                const std::string& out_path) {
  const auto load = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw adgen::IoError("cannot open report file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return harness::report_from_json(ss.str());
  };
  const auto a = load(report_a_path);
  const auto b = load(report_b_path);
  const auto deltas = harness::ablation_compare(a, b);
  std::fputs(harness::delta_table(deltas).c_str(), stdout);
  if (!out_path.empty()) {
    std::string lines;
    for (const auto& d : deltas) {
      nlohmann::ordered_json j = {{"metric", d.metric},
                                  {"a", d.a ? nlohmann::json(*d.a) : nullptr},
                                  {"b", d.b ? nlohmann::json(*d.b) : nullptr},
                                  {"delta", d.delta ? nlohmann::json(*d.delta)
                                                    : nullptr},
                                  {"direction", d.direction}};
      lines += j.dump() + "\n";
    }
    write_text(out_path, lines);
  }
  return kExitOk;
}

int run_select(const std::string& sets_path, const std::string& profiles_path,
               const std::string& embeddings_path, const std::string& out_path) {
  const auto sets = corpus::read_records<corpus::HeadlineSet>(sets_path);
  const auto provider = provider_from(embeddings_path);

  std::vector<harness::UserProfile> profiles;
  {
    std::ifstream in(profiles_path);
    if (!in) throw adgen::IoError("cannot open profile file: " + profiles_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("id"))
        throw adgen::ValidationError("profile file line " +
                                     std::to_string(lineno) + ": invalid JSON");
      harness::UserProfile p;
      p.id = j.at("id").get<std::string>();
      if (j.contains("text")) p.text = j.at("text").get<std::string>();
      if (j.contains("vector")) {
        embedding::EmbeddingVector v;
        v.values = j.at("vector").get<std::vector<double>>();
        p.vector = std::move(v);
      }
      if (p.text.empty() && !p.vector.has_value())
        throw adgen::ValidationError("profile file line " +
                                     std::to_string(lineno) +
                                     ": needs text or vector");
      profiles.push_back(std::move(p));
    }
  }

  std::string lines;
  for (const auto& set : sets) {
    for (const auto& profile : profiles) {
      const auto sel = harness::select_for_profile(set, profile, *provider);
      nlohmann::ordered_json j = {{"ad_id", set.ad_id},
                                  {"profile_id", profile.id},
                                  {"headline", sel.headline},
                                  {"similarity", sel.similarity},
                                  {"index", sel.index}};
      lines += j.dump() + "\n";
    }
  }
  write_text(out_path, lines);
  std::printf("selected headlines for %zu sets x %zu profiles\n", sets.size(),
              profiles.size());
  return kExitOk;
}

int run_split(const std::string& records_path, double fraction,
              const std::string& train_path, const std::string& test_path) {
  const auto records = corpus::read_records<corpus::AdRecord>(records_path);
  const auto [train, test] = corpus::split_chronological(records, fraction);
  corpus::write_records(train, train_path);
  corpus::write_records(test, test_path);
  std::printf("split %zu records into %zu train / %zu test\n", records.size(),
              train.size(), test.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-aware ad headline toolkit: rewards, metrics, "
               "reward-model and policy training, data pipeline, and "
               "serving-time selection"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonState state;
  app.add_option("--seed", state.seed, "random seed (overrides config files)")
      ->each([&](const std::string&) { state.seed_given = true; });
  app.add_option("--config", state.config_path, "key = value config file");
  app.add_option("--lexicon", state.lexicon_path, "style lexicon file");
  std::string out_path;
  app.add_option("--out", out_path, "primary output file");

  // score
  auto* score = app.add_subcommand("score", "composite rewards for a headline-set file");
  std::string sets_path, records_path;
  ScorerOptions quality_opts, ctr_opts;
  score->add_option("--sets", sets_path, "headline sets (JSONL)")->required();
  score->add_option("--records", records_path, "ad records (JSONL)")->required();
  add_scorer_options(score, "quality", &quality_opts);
  add_scorer_options(score, "ctr", &ctr_opts);

  // metrics
  auto* metrics = app.add_subcommand("metrics", "evaluation report over generated sets");
  std::string refs_path, embeddings_path, nli_path;
  metrics->add_option("--sets", sets_path, "headline sets (JSONL)")->required();
  metrics->add_option("--refs", refs_path, "ad records with reference titles")->required();
  metrics->add_option("--embeddings", embeddings_path, "precomputed embedding file");
  metrics->add_option("--nli-scores", nli_path, "precomputed entailment scores (JSONL)");

  // train-quality
  auto* train_quality = app.add_subcommand("train-quality", "train the faithfulness classifier");
  std::string data_path;
  train_quality->add_option("--data", data_path, "labeled quality data (JSONL)")->required();

  // train-ctr
  auto* train_ctr = app.add_subcommand("train-ctr", "train the pairwise CTR ranker");
  std::string pairs_path;
  train_ctr->add_option("--pairs", pairs_path, "CTR pairs (JSONL)")->required();

  // mine-pairs
  auto* mine = app.add_subcommand("mine-pairs", "mine CTR pairs from interaction logs");
  std::string logs_path;
  mine->add_option("--logs", logs_path, "interaction logs (JSONL)")->required();

  // train-grpo
  auto* train_grpo = app.add_subcommand("train-grpo", "train the categorical bank policy");
  std::string bank_path, policy_path, trace_path;
  train_grpo->add_option("--bank", bank_path, "candidate bank (JSONL)")->required();
  train_grpo->add_option("--records", records_path, "ad records (JSONL)")->required();
  train_grpo->add_option("--out-policy", policy_path, "trained policy file")->required();
  train_grpo->add_option("--out-trace", trace_path, "per-step trace (JSONL)");
  add_scorer_options(train_grpo, "quality", &quality_opts);
  add_scorer_options(train_grpo, "ctr", &ctr_opts);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "data-generation pipeline stages");
  std::string stage, quads_path, templates_path, stop_tokens_path, out_quads_path;
  int k_keywords = 6;
  pipe->add_option("stage", stage, "enrich|keywords|generate|verify|assemble")->required();
  pipe->add_option("--records", records_path, "ad records (JSONL)");
  pipe->add_option("--quadruples", quads_path, "quadruples (JSONL, verify stage)");
  pipe->add_option("--sets", sets_path, "headline sets (JSONL, assemble stage)");
  pipe->add_option("--templates", templates_path, "headline template file");
  pipe->add_option("--stop-tokens", stop_tokens_path, "stop-token list file");
  pipe->add_option("-k,--keywords", k_keywords, "keywords per ad")->check(CLI::PositiveNumber);
  pipe->add_option("--out-quadruples", out_quads_path, "also write generated quadruples");

  // compare
  auto* compare = app.add_subcommand("compare", "per-metric deltas between two reports");
  std::string report_a_path, report_b_path;
  compare->add_option("--report-a", report_a_path, "baseline report (JSON)")->required();
  compare->add_option("--report-b", report_b_path, "comparison report (JSON)")->required();

  // select
  auto* select = app.add_subcommand("select", "profile-based serving-time selection");
  std::string profiles_path;
  select->add_option("--sets", sets_path, "headline sets (JSONL)")->required();
  select->add_option("--profiles", profiles_path, "user profiles (JSONL)")->required();
  select->add_option("--embeddings", embeddings_path, "precomputed embedding file");

  // split
  auto* split = app.add_subcommand("split", "chronological train/test split");
  double fraction = 0.5;
  std::string train_path, test_path;
  split->add_option("--records", records_path, "ad records (JSONL)")->required();
  split->add_option("--fraction", fraction, "train fraction in (0,1)")->required();
  split->add_option("--out-train", train_path, "train output")->required();
  split->add_option("--out-test", test_path, "test output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
      return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (score->parsed())
      return run_score(state, sets_path, records_path, quality_opts, ctr_opts,
                       out_path);
    if (metrics->parsed())
      return run_metrics(state, sets_path, refs_path, embeddings_path, nli_path,
                         out_path);
    if (train_quality->parsed()) {
      if (out_path.empty())
        throw adgen::ValidationError("train-quality needs --out for the model");
      return run_train_quality(state, data_path, out_path);
    }
    if (train_ctr->parsed()) {
      if (out_path.empty())
        throw adgen::ValidationError("train-ctr needs --out for the model");
      return run_train_ctr(state, pairs_path, out_path);
    }
    if (mine->parsed()) {
      if (out_path.empty())
        throw adgen::ValidationError("mine-pairs needs --out for the pairs");
      return run_mine_pairs(logs_path, out_path);
    }
    if (train_grpo->parsed())
      return run_train_grpo(state, bank_path, records_path, quality_opts,
                            ctr_opts, policy_path, trace_path);
    if (pipe->parsed()) {
      if (out_path.empty())
        throw adgen::ValidationError("pipeline needs --out");
      return run_pipeline(state, stage, records_path, quads_path, sets_path,
                          templates_path, stop_tokens_path, k_keywords,
                          out_path, out_quads_path);
    }
    if (compare->parsed())
      return run_compare(report_a_path, report_b_path, out_path);
    if (select->parsed()) {
      if (out_path.empty())
        throw adgen::ValidationError("select needs --out");
      return run_select(sets_path, profiles_path, embeddings_path, out_path);
    }
    if (split->parsed())
      return run_split(records_path, fraction, train_path, test_path);
    std::fputs("no subcommand given\n", stderr);
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const adgen::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
