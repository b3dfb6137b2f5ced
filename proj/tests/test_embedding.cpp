#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "adgen/embedding.hpp"
#include "adgen/errors.hpp"
#include "adgen/reference.hpp"

namespace embedding = adgen::embedding;
using embedding::EmbeddingVector;

TEST_SUITE("embedding") {

TEST_CASE("default provider is deterministic and unit-norm") {
  const embedding::HashedBigramProvider provider;
  const auto a = provider.embed("超值跑鞋上新");
  const auto b = provider.embed("超值跑鞋上新");
  CHECK(a.values == b.values);
  double norm = 0.0;
  for (const double x : a.values) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.dim() == 256);
}

TEST_CASE("texts sharing no character bigrams are orthogonal") {
  // Disjoint codepoint sets, so even the sentinel bigrams differ; the
  // check also guards against accidental hash collisions for this pair.
  const embedding::HashedBigramProvider provider;
  const auto a = provider.embed("abc");
  const auto b = provider.embed("xyz");
  CHECK(embedding::cosine(a, b) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cosine: identity, orthogonal, antiparallel") {
  const EmbeddingVector v{{1.0, 2.0, 3.0}};
  CHECK(embedding::cosine(v, v) == doctest::Approx(1.0));
  const EmbeddingVector e1{{1.0, 0.0}};
  const EmbeddingVector e2{{0.0, 1.0}};
  CHECK(embedding::cosine(e1, e2) == doctest::Approx(0.0));
  const EmbeddingVector neg{{-1.0, -2.0, -3.0}};
  CHECK(embedding::cosine(v, neg) == doctest::Approx(-1.0));
}

TEST_CASE("cosine: zero vectors and dim mismatches error") {
  const EmbeddingVector z{{0.0, 0.0}};
  const EmbeddingVector v{{1.0, 0.0}};
  CHECK_THROWS_AS(embedding::cosine(z, v), std::invalid_argument);
  const EmbeddingVector w{{1.0, 0.0, 0.0}};
  CHECK_THROWS_AS(embedding::cosine(v, w), std::invalid_argument);
}

TEST_CASE("avg_pairwise_cosine: identical set scores 100") {
  const embedding::HashedBigramProvider provider;
  const std::vector<std::string> same(4, "新品跑鞋");
  CHECK(embedding::avg_pairwise_cosine(same, provider) ==
        doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("avg_pairwise_cosine: pairwise-orthogonal texts score 0") {
  const embedding::HashedBigramProvider provider;
  // Disjoint codepoint sets, no bucket collisions among their bigrams.
  CHECK(embedding::avg_pairwise_cosine({"abc", "xyz"}, provider) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("avg_pairwise_cosine: matches pair-enumeration reference") {
  const embedding::HashedBigramProvider provider;
  std::mt19937_64 rng(31);
  std::vector<std::string> texts;
  static const std::vector<std::string> pool = {"跑", "鞋", "新", "品", "热",
                                                "卖", "a",  "b",  "c"};
  for (int i = 0; i < 9; ++i) {
    std::string t;
    const int len = 2 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) t += pool[rng() % pool.size()];
    texts.push_back(std::move(t));
  }
  CHECK(embedding::avg_pairwise_cosine(texts, provider) ==
        adgen::reference::avg_pairwise_cosine(texts, provider));
  CHECK_THROWS_AS(embedding::avg_pairwise_cosine({"one"}, provider),
                  std::invalid_argument);
}

TEST_CASE("file-backed provider round-trips and rejects unknown ids") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "adgen-embedding-tests";
  fs::create_directories(dir);
  const auto path = dir / "vectors.txt";
  {
    std::ofstream out(path);
    out << "dim 3\n";
    out << "профиль one\t1 0 0\n";
    out << "标题 two\t0 0.5 0.5\n";
  }
  const auto provider = embedding::FileBackedProvider::load(path);
  CHECK(provider.dim() == 3);
  CHECK(provider.size() == 2);
  CHECK(provider.embed("профиль one").values == std::vector<double>{1, 0, 0});
  CHECK_THROWS_AS(provider.embed("missing"), adgen::ValidationError);

  {
    std::ofstream out(path);
    out << "dim 3\nid\t1 2\n";
  }
  CHECK_THROWS_AS(embedding::FileBackedProvider::load(path),
                  adgen::ValidationError);
}

}  // TEST_SUITE
