#include "adgen/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "adgen/errors.hpp"
#include "adgen/parallel.hpp"
#include "adgen/unicode.hpp"

namespace adgen::embedding {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a_step(std::uint64_t h, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) {
    h ^= (v >> (8 * k)) & 0xFF;
    h *= kFnvPrime;
  }
  return h;
}

constexpr char32_t kBos = 0x110000;
constexpr char32_t kEos = 0x110001;

}  // namespace

HashedBigramProvider::HashedBigramProvider(int dim) : dim_(dim) {
  if (dim < 1)
    throw std::invalid_argument("HashedBigramProvider: dim must be >= 1");
}

EmbeddingVector HashedBigramProvider::embed(const std::string& text) const {
  EmbeddingVector v;
  v.values.assign(static_cast<std::size_t>(dim_), 0.0);
  std::vector<char32_t> cps = uni::decode(text);
  if (cps.empty()) return v;  // zero vector for empty/undecodable text
  cps.insert(cps.begin(), kBos);
  cps.push_back(kEos);
  for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
    std::uint64_t h = fnv1a_step(kFnvOffset, static_cast<std::uint32_t>(cps[i]));
    h = fnv1a_step(h, static_cast<std::uint32_t>(cps[i + 1]));
    v.values[h % static_cast<std::uint64_t>(dim_)] += 1.0;
  }
  double norm = 0.0;
  for (double x : v.values) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v.values) x /= norm;
  return v;
}

std::string HashedBigramProvider::name() const {
  return "hashed-bigram-" + std::to_string(dim_);
}

FileBackedProvider FileBackedProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  FileBackedProvider p;
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("embedding file is empty: " + path.string());
  {
    std::istringstream hs(line);
    std::string tag;
    if (!(hs >> tag >> p.dim_) || tag != "dim" || p.dim_ < 1)
      throw ValidationError("embedding file line 1: expected 'dim <d>' header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError("embedding file line " + std::to_string(lineno) +
                            ": missing tab separator");
    std::string id = line.substr(0, tab);
    EmbeddingVector v;
    v.values.reserve(static_cast<std::size_t>(p.dim_));
    std::istringstream vs(line.substr(tab + 1));
    double x;
    while (vs >> x) v.values.push_back(x);
    if (v.dim() != p.dim_)
      throw ValidationError("embedding file line " + std::to_string(lineno) +
                            ": expected " + std::to_string(p.dim_) +
                            " values, got " + std::to_string(v.dim()));
    p.vectors_.emplace(std::move(id), std::move(v));
  }
  return p;
}

EmbeddingVector FileBackedProvider::embed(const std::string& text) const {
  const auto it = vectors_.find(text);
  if (it == vectors_.end())
    throw ValidationError("embedding file has no entry for id: " + text);
  return it->second;
}

std::string FileBackedProvider::name() const {
  return "file-backed-" + std::to_string(dim_);
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("cosine: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double avg_pairwise_cosine(const std::vector<std::string>& texts,
                           const EmbeddingProvider& provider) {
  const long n = static_cast<long>(texts.size());
  if (n < 2)
    throw std::invalid_argument("avg_pairwise_cosine: need at least 2 texts");
  std::vector<EmbeddingVector> vecs(static_cast<std::size_t>(n));
  par::for_index(n, 64, [&](long i) {
    vecs[static_cast<std::size_t>(i)] =
        provider.embed(texts[static_cast<std::size_t>(i)]);
  });

  std::vector<double> sims(static_cast<std::size_t>(n) * n, 0.0);
  par::for_index(n * n, 4096, [&](long k) {
    const long i = k / n, j = k % n;
    if (j <= i) return;
    sims[static_cast<std::size_t>(k)] = cosine(vecs[static_cast<std::size_t>(i)],
                                               vecs[static_cast<std::size_t>(j)]);
  });
  double sum = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) sum += sims[static_cast<std::size_t>(i) * n + j];
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  return 100.0 * sum / pairs;
}

}  // namespace adgen::embedding
