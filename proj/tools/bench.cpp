// Benchmark comparing the serial reference kernels with the OpenMP
// versions on synthetic headline sets. Also asserts that both paths give
// bit-identical results before timing them.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "adgen/embedding.hpp"
#include "adgen/parallel.hpp"
#include "adgen/reference.hpp"
#include "adgen/rewards.hpp"
#include "adgen/text.hpp"

namespace {

namespace text = adgen::text;
namespace rewards = adgen::rewards;
namespace reference = adgen::reference;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string random_headline(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {
      "跑", "鞋", "新", "品", "热", "卖", "真", "好", "用", "吗",
      "最", "像", "据", "说", "轻", "盈", "透", "气", "🔥", "？"};
  std::string out;
  const int len = 6 + static_cast<int>(rng() % 10);
  for (int i = 0; i < len; ++i) out += pool[rng() % pool.size()];
  return out;
}

template <class F>
double time_best_of(int repeats, F&& fn) {
  double best = 1e100;
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

void report_row(const char* name, double serial, double parallel) {
  std::printf("%-24s %10.4fs %10.4fs %9.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d (OpenMP %s)\n\n", adgen::par::max_threads(),
              adgen::par::openmp_enabled() ? "on" : "off");
  std::printf("%-24s %11s %11s %10s\n", "kernel", "serial", "parallel",
              "speedup");

  std::mt19937_64 rng(2024);

  {  // pairwise BLEU over one large set
    std::vector<std::string> headlines;
    for (int i = 0; i < 600; ++i) headlines.push_back(random_headline(rng));
    const auto toks = text::tokenize_all(headlines);
    const double serial_value = reference::pair_bleu(toks, {});
    const double parallel_value = text::pair_bleu(toks, {});
    if (serial_value != parallel_value) {
      std::fprintf(stderr, "pair_bleu mismatch: %.17g vs %.17g\n", serial_value,
                   parallel_value);
      return 1;
    }
    const double ts = time_best_of(3, [&] { (void)reference::pair_bleu(toks, {}); });
    const double tp = time_best_of(3, [&] { (void)text::pair_bleu(toks, {}); });
    report_row("pair_bleu n=600", ts, tp);
  }

  {  // self BLEU over one large set
    std::vector<std::string> headlines;
    for (int i = 0; i < 400; ++i) headlines.push_back(random_headline(rng));
    const auto toks = text::tokenize_all(headlines);
    if (reference::self_bleu(toks, {}) != text::self_bleu(toks, {})) {
      std::fprintf(stderr, "self_bleu mismatch\n");
      return 1;
    }
    const double ts = time_best_of(3, [&] { (void)reference::self_bleu(toks, {}); });
    const double tp = time_best_of(3, [&] { (void)text::self_bleu(toks, {}); });
    report_row("self_bleu n=400", ts, tp);
  }

  {  // mean pairwise cosine
    const adgen::embedding::HashedBigramProvider provider;
    std::vector<std::string> headlines;
    for (int i = 0; i < 1500; ++i) headlines.push_back(random_headline(rng));
    if (reference::avg_pairwise_cosine(headlines, provider) !=
        adgen::embedding::avg_pairwise_cosine(headlines, provider)) {
      std::fprintf(stderr, "avg_pairwise_cosine mismatch\n");
      return 1;
    }
    const double ts = time_best_of(
        3, [&] { (void)reference::avg_pairwise_cosine(headlines, provider); });
    const double tp = time_best_of(3, [&] {
      (void)adgen::embedding::avg_pairwise_cosine(headlines, provider);
    });
    report_row("avg_cosine n=1500", ts, tp);
  }

  {  // batch composite scoring
    rewards::RewardConfig config;
    const rewards::ConstScorer ones(1.0);
    std::vector<std::pair<std::string, std::string>> batch;
    for (int i = 0; i < 4000; ++i) {
      std::vector<std::string> headlines;
      for (int k = 0; k < 6; ++k) headlines.push_back(random_headline(rng));
      batch.emplace_back("广告内容" + std::to_string(i),
                         rewards::canonical_raw_output(headlines));
    }
    const auto a = reference::score_batch(batch, ones, ones, config);
    const auto b = rewards::score_batch(batch, ones, ones, config);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].composite != b[i].composite) {
        std::fprintf(stderr, "score_batch mismatch at %zu\n", i);
        return 1;
      }
    }
    const double ts =
        time_best_of(3, [&] { (void)reference::score_batch(batch, ones, ones, config); });
    const double tp =
        time_best_of(3, [&] { (void)rewards::score_batch(batch, ones, ones, config); });
    report_row("score_batch n=4000", ts, tp);
  }

  return 0;
}
