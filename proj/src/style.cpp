#include "adgen/style.hpp"

#include <algorithm>
#include <bitset>
#include <fstream>
#include <stdexcept>

#include "adgen/errors.hpp"
#include "adgen/unicode.hpp"

namespace adgen::style {

int style_index(const StyleType& s) {
  return static_cast<int>(s.directness) * 8 + static_cast<int>(s.emoji) * 4 +
         static_cast<int>(s.rhetoric);
}

StyleType style_from_index(int index) {
  if (index < 0 || index >= kStyleCount)
    throw std::invalid_argument("style_from_index: index out of range");
  StyleType s;
  s.directness = static_cast<Directness>(index / 8);
  s.emoji = static_cast<EmojiUse>((index / 4) % 2);
  s.rhetoric = static_cast<Rhetoric>(index % 4);
  return s;
}

std::vector<StyleType> all_styles() {
  std::vector<StyleType> out;
  out.reserve(kStyleCount);
  for (int i = 0; i < kStyleCount; ++i) out.push_back(style_from_index(i));
  return out;
}

namespace {

constexpr const char* kDirectnessNames[] = {"direct", "indirect"};
constexpr const char* kEmojiNames[] = {"with_emoji", "without_emoji"};
constexpr const char* kRhetoricNames[] = {"question", "exaggeration",
                                          "metaphor", "statement"};

template <std::size_t N>
int find_name(const char* const (&names)[N], std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (s == names[i]) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::string to_string(const StyleType& s) {
  std::string out = kDirectnessNames[static_cast<int>(s.directness)];
  out += '|';
  out += kEmojiNames[static_cast<int>(s.emoji)];
  out += '|';
  out += kRhetoricNames[static_cast<int>(s.rhetoric)];
  return out;
}

StyleType parse_style(std::string_view s) {
  const auto p1 = s.find('|');
  const auto p2 = p1 == std::string_view::npos ? p1 : s.find('|', p1 + 1);
  if (p1 == std::string_view::npos || p2 == std::string_view::npos)
    throw ValidationError("invalid style string: " + std::string(s));
  const int d = find_name(kDirectnessNames, s.substr(0, p1));
  const int e = find_name(kEmojiNames, s.substr(p1 + 1, p2 - p1 - 1));
  const int r = find_name(kRhetoricNames, s.substr(p2 + 1));
  if (d < 0 || e < 0 || r < 0)
    throw ValidationError("invalid style string: " + std::string(s));
  return {static_cast<Directness>(d), static_cast<EmojiUse>(e),
          static_cast<Rhetoric>(r)};
}

const StyleLexicon& default_lexicon() {
  static const StyleLexicon lex = {
      // superlatives and intensifiers
      {"最", "超", "太", "绝了", "神仙", "震惊", "无敌", "史上", "爆款", "狂",
       "巨"},
      // simile and comparison markers
      {"像", "仿佛", "如同", "宛如", "犹如", "好比", "堪比", "神器", "天花板"},
      // hedging phrases
      {"或许", "可能", "也许", "据说", "听说", "悄悄", "偷偷", "不妨", "原来"},
  };
  return lex;
}

StyleLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  StyleLexicon lex;
  std::vector<std::string>* section = nullptr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[exaggeration]")
        section = &lex.exaggeration_markers;
      else if (line == "[metaphor]")
        section = &lex.metaphor_markers;
      else if (line == "[indirectness]")
        section = &lex.indirectness_markers;
      else
        throw ValidationError("lexicon file line " + std::to_string(lineno) +
                              ": unknown section " + line);
      continue;
    }
    if (section == nullptr)
      throw ValidationError("lexicon file line " + std::to_string(lineno) +
                            ": marker before any section header");
    section->push_back(line);
  }
  if (lex.exaggeration_markers.empty() || lex.metaphor_markers.empty() ||
      lex.indirectness_markers.empty())
    throw ValidationError("lexicon file must fill all three sections: " +
                          path.string());
  return lex;
}

namespace {

bool any_marker(std::string_view headline, const std::vector<std::string>& markers) {
  for (const auto& m : markers) {
    if (!m.empty() && headline.find(m) != std::string_view::npos) return true;
  }
  return false;
}

}  // namespace

StyleType classify_style(std::string_view headline, const StyleLexicon& lexicon) {
  if (headline.empty())
    throw std::invalid_argument("classify_style: headline must be non-empty");
  StyleType s;
  s.emoji = uni::contains_emoji(headline) ? EmojiUse::with_emoji
                                          : EmojiUse::without_emoji;
  if (uni::contains_question_mark(headline))
    s.rhetoric = Rhetoric::question;
  else if (any_marker(headline, lexicon.exaggeration_markers))
    s.rhetoric = Rhetoric::exaggeration;
  else if (any_marker(headline, lexicon.metaphor_markers))
    s.rhetoric = Rhetoric::metaphor;
  else
    s.rhetoric = Rhetoric::statement;
  s.directness = any_marker(headline, lexicon.indirectness_markers)
                     ? Directness::indirect
                     : Directness::direct;
  return s;
}

int distinct_style_count(const std::vector<std::string>& headlines,
                         const StyleLexicon& lexicon) {
  std::bitset<kStyleCount> seen;
  for (const auto& h : headlines) seen.set(style_index(classify_style(h, lexicon)));
  return static_cast<int>(seen.count());
}

double coverage(const std::vector<std::string>& headlines,
                const StyleLexicon& lexicon) {
  if (headlines.empty())
    throw std::invalid_argument("coverage: headline set must be non-empty");
  const int denom = std::min<int>(static_cast<int>(headlines.size()), kStyleCount);
  return static_cast<double>(distinct_style_count(headlines, lexicon)) / denom;
}

}  // namespace adgen::style
