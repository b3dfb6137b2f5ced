#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace adgen::embedding {

struct EmbeddingVector {
  std::vector<double> values;

  int dim() const { return static_cast<int>(values.size()); }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingVector embed(const std::string& text) const = 0;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
};

// Self-contained default: character-bigram term frequencies (over the
// decoded codepoint sequence, padded with begin/end sentinels) hashed into
// a fixed number of buckets, then L2-normalized. Deterministic; any
// non-empty text maps to a unit vector.
class HashedBigramProvider final : public EmbeddingProvider {
 public:
  explicit HashedBigramProvider(int dim = 256);

  EmbeddingVector embed(const std::string& text) const override;
  int dim() const override { return dim_; }
  std::string name() const override;

 private:
  int dim_;
};

// Reads precomputed vectors from a text file:
//   line 1:      "dim <d>"
//   other lines: "<id>\t<v1> <v2> ... <vd>"
// embed() looks the text up as an id and errors on unknown ids.
class FileBackedProvider final : public EmbeddingProvider {
 public:
  static FileBackedProvider load(const std::filesystem::path& path);

  EmbeddingVector embed(const std::string& text) const override;
  int dim() const override { return dim_; }
  std::string name() const override;
  std::size_t size() const { return vectors_.size(); }

 private:
  int dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
};

// dot(a,b) / (|a||b|). Errors on dimension mismatch or a zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Mean cosine over all unordered pairs, reported on a 0-100 scale.
// Requires N >= 2. OpenMP-parallel with a fixed reduction order.
double avg_pairwise_cosine(const std::vector<std::string>& texts,
                           const EmbeddingProvider& provider);

}  // namespace adgen::embedding
