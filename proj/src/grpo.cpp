#include "adgen/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "adgen/errors.hpp"
#include "adgen/parallel.hpp"

namespace adgen::grpo {

void CandidateBank::validate() const {
  if (candidates.size() < 2)
    throw ValidationError("bank: need at least 2 candidates");
  std::unordered_set<std::string> seen;
  for (const auto& c : candidates) {
    if (c.headline.empty())
      throw ValidationError("bank: field 'headline': must be non-empty");
    if (!seen.insert(c.headline).second)
      throw ValidationError("bank: duplicate headline: " + c.headline);
  }
}

PolicyParams make_policy(std::size_t bank_size) {
  PolicyParams p;
  p.logits.assign(bank_size, 0.0);
  p.reference_logits.assign(bank_size, 0.0);
  return p;
}

void GrpoConfig::validate() const {
  if (group_size < 2) throw ValidationError("grpo: group_size must be >= 2");
  if (set_size < 1) throw ValidationError("grpo: set_size must be >= 1");
  if (beta < 0.0) throw ValidationError("grpo: beta must be >= 0");
  if (!(learning_rate > 0.0) && learning_rate != 0.0)
    throw ValidationError("grpo: learning_rate must be >= 0");
  if (steps < 1) throw ValidationError("grpo: steps must be >= 1");
  if (!(advantage_epsilon > 0.0))
    throw ValidationError("grpo: advantage_epsilon must be > 0");
}

std::vector<double> log_softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("log_softmax: empty logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double v : logits) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out = log_softmax(logits);
  for (double& v : out) v = std::exp(v);
  return out;
}

namespace {

// Uniform in [0, 1) from the top 53 bits of one rng draw; pinned here so
// sampling is identical across standard libraries.
double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int draw_categorical(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = uniform53(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // guard against rounding
}

}  // namespace

SampledSet sample_set(const PolicyParams& policy, const CandidateBank& bank,
                      int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_set: n must be >= 1");
  if (policy.logits.size() != bank.size())
    throw std::invalid_argument("sample_set: policy/bank size mismatch");
  const std::vector<double> logp = log_softmax(policy.logits);
  std::vector<double> probs(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) probs[i] = std::exp(logp[i]);

  SampledSet out;
  out.choices.reserve(static_cast<std::size_t>(n));
  out.set.target_count = n;
  for (int k = 0; k < n; ++k) {
    const int c = draw_categorical(probs, rng);
    out.choices.push_back(c);
    out.log_prob += logp[static_cast<std::size_t>(c)];
    out.set.headlines.push_back(bank.candidates[static_cast<std::size_t>(c)].headline);
  }
  out.set.raw_output = rewards::canonical_raw_output(out.set.headlines);
  return out;
}

double kl_divergence(const PolicyParams& policy) {
  if (policy.logits.size() != policy.reference_logits.size())
    throw std::invalid_argument("kl_divergence: logit length mismatch");
  const std::vector<double> lp = log_softmax(policy.logits);
  const std::vector<double> lq = log_softmax(policy.reference_logits);
  double kl = 0.0;
  for (std::size_t i = 0; i < lp.size(); ++i)
    kl += std::exp(lp[i]) * (lp[i] - lq[i]);
  return kl;
}

std::vector<double> group_advantages(std::span<const double> group_rewards,
                                     double epsilon) {
  if (group_rewards.size() < 2)
    throw std::invalid_argument("group_advantages: need G >= 2");
  const double g = static_cast<double>(group_rewards.size());
  double mean = 0.0;
  for (const double r : group_rewards) mean += r;
  mean /= g;
  double var = 0.0;
  for (const double r : group_rewards) var += (r - mean) * (r - mean);
  const double std_dev = std::sqrt(var / g);
  std::vector<double> out(group_rewards.size());
  for (std::size_t i = 0; i < group_rewards.size(); ++i)
    out[i] = (group_rewards[i] - mean) / (std_dev + epsilon);
  return out;
}

double surrogate_loss(const PolicyParams& policy,
                      std::span<const SampledSet> sets,
                      std::span<const double> advantages, double beta) {
  double loss = 0.0;
  std::vector<double>* no_grad = nullptr;
  surrogate_loss_grad(policy, sets, advantages, beta, &loss, no_grad);
  return loss;
}

void surrogate_loss_grad(const PolicyParams& policy,
                         std::span<const SampledSet> sets,
                         std::span<const double> advantages, double beta,
                         double* loss, std::vector<double>* grad) {
  if (sets.size() != advantages.size())
    throw std::invalid_argument("surrogate_loss: sets/advantages mismatch");
  if (sets.empty()) throw std::invalid_argument("surrogate_loss: empty group");
  const std::size_t b = policy.logits.size();
  const std::vector<double> lp = log_softmax(policy.logits);
  std::vector<double> p(b);
  for (std::size_t i = 0; i < b; ++i) p[i] = std::exp(lp[i]);

  const double g = static_cast<double>(sets.size());
  const long n_draws = static_cast<long>(sets.front().choices.size());

  // Policy-gradient term: log_prob recomputed from the current logits so
  // loss and gradient stay consistent when the policy has moved since
  // sampling.
  double pg = 0.0;
  if (grad != nullptr) grad->assign(b, 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    double set_logp = 0.0;
    for (const int c : sets[s].choices)
      set_logp += lp[static_cast<std::size_t>(c)];
    pg += advantages[s] * set_logp;
    if (grad != nullptr) {
      // d log_prob / d logit_k = sum_draws (1[c = k] - p_k)
      for (const int c : sets[s].choices)
        (*grad)[static_cast<std::size_t>(c)] -= advantages[s] / g;
      for (std::size_t k = 0; k < b; ++k)
        (*grad)[k] += advantages[s] / g * static_cast<double>(n_draws) * p[k];
    }
  }

  const double kl = kl_divergence(policy);
  *loss = -pg / g + beta * static_cast<double>(n_draws) * kl;

  if (grad != nullptr && beta != 0.0) {
    const std::vector<double> lq = log_softmax(policy.reference_logits);
    // d KL / d logit_k = p_k * ((lp_k - lq_k) - KL)
    for (std::size_t k = 0; k < b; ++k) {
      (*grad)[k] += beta * static_cast<double>(n_draws) * p[k] *
                    ((lp[k] - lq[k]) - kl);
    }
  }
}

Objective composite_objective() {
  return [](const rewards::RewardVector& rv) { return rv.composite; };
}

StepStats grpo_step(PolicyParams& policy, const std::string& content,
                    const CandidateBank& bank, const RewardFn& reward_fn,
                    const GrpoConfig& config, std::mt19937_64& rng,
                    const Objective& objective) {
  config.validate();
  const int g = config.group_size;
  std::vector<SampledSet> sets;
  sets.reserve(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i)
    sets.push_back(sample_set(policy, bank, config.set_size, rng));

  // Group members scored concurrently; results land by index, so the
  // outcome does not depend on the thread count.
  std::vector<rewards::RewardVector> rvs(static_cast<std::size_t>(g));
  par::for_index(g, 2, [&](long i) {
    rvs[static_cast<std::size_t>(i)] =
        reward_fn(content, sets[static_cast<std::size_t>(i)].set.raw_output);
  });

  std::vector<double> objective_values(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i)
    objective_values[static_cast<std::size_t>(i)] =
        objective(rvs[static_cast<std::size_t>(i)]);

  const std::vector<double> advantages =
      group_advantages(objective_values, config.advantage_epsilon);

  StepStats stats;
  double loss = 0.0;
  std::vector<double> grad;
  surrogate_loss_grad(policy, sets, advantages, config.beta, &loss, &grad);
  for (std::size_t k = 0; k < policy.logits.size(); ++k)
    policy.logits[k] -= config.learning_rate * grad[k];

  for (const auto& rv : rvs) {
    stats.reward_means.diversity += rv.diversity;
    stats.reward_means.quality += rv.quality;
    stats.reward_means.ctr += rv.ctr;
    stats.reward_means.quantity += rv.quantity;
    stats.reward_means.format += rv.format;
    stats.reward_means.composite += rv.composite;
  }
  const double inv_g = 1.0 / static_cast<double>(g);
  stats.reward_means.diversity *= inv_g;
  stats.reward_means.quality *= inv_g;
  stats.reward_means.ctr *= inv_g;
  stats.reward_means.quantity *= inv_g;
  stats.reward_means.format *= inv_g;
  stats.reward_means.composite *= inv_g;
  for (const double v : objective_values) stats.objective_mean += v;
  stats.objective_mean *= inv_g;
  stats.kl = kl_divergence(policy);
  double gn = 0.0;
  for (const double v : grad) gn += v * v;
  stats.grad_norm = std::sqrt(gn);
  return stats;
}

std::pair<PolicyParams, TrainTrace> train(
    const std::vector<std::string>& contents, const CandidateBank& bank,
    const RewardFn& reward_fn, const GrpoConfig& config,
    const Objective& objective) {
  if (contents.empty()) throw ValidationError("train: no contents");
  bank.validate();
  config.validate();
  PolicyParams policy = make_policy(bank.size());
  TrainTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(config.steps));
  std::mt19937_64 rng(config.seed);
  for (int step = 0; step < config.steps; ++step) {
    const std::string& content = contents[static_cast<std::size_t>(step) %
                                          contents.size()];
    trace.steps.push_back(
        grpo_step(policy, content, bank, reward_fn, config, rng, objective));
  }
  return {std::move(policy), std::move(trace)};
}

void save_policy(const PolicyParams& policy, const std::filesystem::path& path) {
  nlohmann::ordered_json j = {{"format", "adgen-policy"},
                              {"logits", policy.logits},
                              {"reference_logits", policy.reference_logits}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write policy file: " + path.string());
  out << j.dump() << '\n';
}

PolicyParams load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid policy file " + path.string() + ": " +
                          e.what());
  }
  if (!j.is_object() || j.value("format", "") != "adgen-policy")
    throw ValidationError("not a policy file: " + path.string());
  PolicyParams p;
  p.logits = j.at("logits").get<std::vector<double>>();
  p.reference_logits = j.at("reference_logits").get<std::vector<double>>();
  if (p.logits.size() != p.reference_logits.size())
    throw ValidationError("policy file logit lengths differ");
  return p;
}

void save_trace(const TrainTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trace file: " + path.string());
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    nlohmann::ordered_json j = {{"step", i},
                                {"composite", s.reward_means.composite},
                                {"diversity", s.reward_means.diversity},
                                {"quality", s.reward_means.quality},
                                {"ctr", s.reward_means.ctr},
                                {"quantity", s.reward_means.quantity},
                                {"format", s.reward_means.format},
                                {"objective", s.objective_mean},
                                {"kl", s.kl},
                                {"grad_norm", s.grad_norm}};
    out << j.dump() << '\n';
  }
}

CandidateBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bank file: " + path.string());
  CandidateBank bank;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ValidationError("bank file line " + std::to_string(lineno) +
                            ": invalid JSON");
    try {
      Candidate c;
      c.headline = j.at("headline").get<std::string>();
      c.style = style::parse_style(j.at("style").get<std::string>());
      c.keyword = j.at("keyword").get<std::string>();
      bank.candidates.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bank file line " + std::to_string(lineno) + ": " +
                            e.what());
    }
  }
  bank.validate();
  return bank;
}

void save_bank(const CandidateBank& bank, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write bank file: " + path.string());
  for (const auto& c : bank.candidates) {
    nlohmann::ordered_json j = {{"headline", c.headline},
                                {"style", style::to_string(c.style)},
                                {"keyword", c.keyword}};
    out << j.dump() << '\n';
  }
}

}  // namespace adgen::grpo
