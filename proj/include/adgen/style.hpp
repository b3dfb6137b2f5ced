#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace adgen::style {

enum class Directness { direct, indirect };
enum class EmojiUse { with_emoji, without_emoji };
enum class Rhetoric { question, exaggeration, metaphor, statement };

// One point in the 2 x 2 x 4 headline style taxonomy.
struct StyleType {
  Directness directness = Directness::direct;
  EmojiUse emoji = EmojiUse::with_emoji;
  Rhetoric rhetoric = Rhetoric::question;

  bool operator==(const StyleType&) const = default;
};

inline constexpr int kStyleCount = 16;

// Stable index in [0, 16): directness-major, then emoji, then rhetoric.
int style_index(const StyleType& s);
StyleType style_from_index(int index);

// All 16 combinations in index order; first is (direct, with_emoji, question).
std::vector<StyleType> all_styles();

std::string to_string(const StyleType& s);
StyleType parse_style(std::string_view s);  // inverse of to_string

// Marker lists driving the rule-based classifier. All entries and lists
// must be non-empty.
struct StyleLexicon {
  std::vector<std::string> exaggeration_markers;
  std::vector<std::string> metaphor_markers;
  std::vector<std::string> indirectness_markers;
};

const StyleLexicon& default_lexicon();

// Lexicon file: "[exaggeration]" / "[metaphor]" / "[indirectness]" section
// headers, one marker per line, '#' comments.
StyleLexicon load_lexicon(const std::filesystem::path& path);

// Deterministic rule-based classification of a non-empty headline:
//   emoji      - with_emoji iff any emoji codepoint is present;
//   rhetoric   - question if '?' or fullwidth '?' is present, else
//                exaggeration if any exaggeration marker matches, else
//                metaphor if any metaphor marker matches, else statement;
//   directness - indirect iff any indirectness marker matches.
// Marker matching is literal substring search.
StyleType classify_style(std::string_view headline, const StyleLexicon& lexicon);

// Number of distinct classified styles in the set.
int distinct_style_count(const std::vector<std::string>& headlines,
                         const StyleLexicon& lexicon);

// Distinct classified styles / min(N, 16); in (0, 1] for non-empty input.
double coverage(const std::vector<std::string>& headlines,
                const StyleLexicon& lexicon);

}  // namespace adgen::style
