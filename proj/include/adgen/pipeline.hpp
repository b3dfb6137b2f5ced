#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "adgen/corpus.hpp"
#include "adgen/style.hpp"

namespace adgen::pipeline {

struct GenerationRequest {
  std::string content;
  std::string keyword;
  style::StyleType style;
};

struct VerifierReport {
  bool keyword_ok = false;
  bool style_ok = false;
  bool passed = false;  // keyword_ok && style_ok
};

// Headline templates per style, each containing a literal {kw} slot.
// Every instantiation of a template must classify back to its own style
// under the default lexicon.
class TemplateSet {
 public:
  static const TemplateSet& defaults();

  // Template file: one "[<style>]" section per style (16 total), one
  // template per line, '#' comments.
  static TemplateSet load(const std::filesystem::path& path);

  const std::vector<std::string>& for_style(const style::StyleType& s) const;
  void add(const style::StyleType& s, std::string tmpl);

  // Every style has at least one template, each with a {kw} slot.
  void validate() const;

 private:
  std::array<std::vector<std::string>, style::kStyleCount> by_style_;
};

std::vector<std::string> default_stop_tokens();
std::vector<std::string> load_stop_tokens(const std::filesystem::path& path);

// Ranks a text's tokens by corpus-level inverse frequency. Tokens unseen
// in the corpus rank rarest; stop tokens are excluded; ties break
// lexicographically.
class KeywordProposer {
 public:
  explicit KeywordProposer(std::vector<std::string> stop_tokens =
                               default_stop_tokens());

  // Accumulates token frequencies from ad content and titles.
  void add_corpus(const std::vector<corpus::AdRecord>& records);

  struct Proposal {
    std::vector<std::string> keywords;
    bool shortfall = false;  // fewer eligible tokens than requested
  };

  Proposal propose(const std::string& text, int k) const;

 private:
  std::unordered_map<std::string, long> frequency_;
  std::unordered_set<std::string> stop_;
};

struct EnrichResult {
  std::vector<corpus::Quadruple> quadruples;
  int skipped = 0;  // records without a usable title or keyword
};

// One quadruple per record: top-1 keyword over title+content, style
// classified from the original title, the title itself as the headline.
EnrichResult enrich(const std::vector<corpus::AdRecord>& records,
                    const KeywordProposer& proposer,
                    const style::StyleLexicon& lexicon);

// Seeded template choice for the requested style, keyword substituted
// into the slot.
std::string generate_controlled(const GenerationRequest& request,
                                const TemplateSet& templates,
                                std::mt19937_64& rng);

// keyword_ok: the keyword's token sequence appears contiguously in the
// headline's token sequence. style_ok: the classified style equals the
// assigned one.
VerifierReport verify(const corpus::Quadruple& quadruple,
                      const style::StyleLexicon& lexicon);

struct BuildResult {
  std::vector<corpus::HeadlineSet> sets;        // one per record, input order
  std::vector<corpus::Quadruple> quadruples;    // retained (verified) only
  int rejected = 0;                             // generated but failed verify
};

// Per record: propose k keywords, pair each with a seeded-random style,
// generate, verify, retain passers. Records are processed independently
// (parallel) with per-record rng streams, so output depends only on
// (records, k, seed).
BuildResult build_sets(const std::vector<corpus::AdRecord>& records,
                       int k_keywords, const TemplateSet& templates,
                       const KeywordProposer& proposer,
                       const style::StyleLexicon& lexicon, std::uint64_t seed);

struct SftExample {
  std::string input;   // prompt wrapping the ad content
  std::string output;  // canonical JSON array of the headlines
};

// Requires every set's ad_id to resolve to a record. Outputs round-trip
// through format_reward with score 1.
std::vector<SftExample> assemble_sft_dataset(
    const std::vector<corpus::HeadlineSet>& sets,
    const std::vector<corpus::AdRecord>& records);

// SFT example file: JSONL {"input", "output"}.
std::size_t write_sft_dataset(const std::vector<SftExample>& examples,
                              const std::filesystem::path& path);

}  // namespace adgen::pipeline
