#include "adgen/unicode.hpp"

#include <algorithm>
#include <iterator>

namespace adgen::uni {

char32_t decode_at(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + len > s.size()) {
    ++i;
    return kInvalid;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong forms, surrogates, and out-of-range values.
  static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kInvalid;
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

std::vector<char32_t> decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = decode_at(s, i);
    if (cp != kInvalid) out.push_back(cp);
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

namespace {

// Sorted range boundaries; a codepoint is inside iff lower_bound lands on
// an odd offset (same trick as the classic n-gram tokenizers).
constexpr char32_t kCjkSplits[] = {
    0x3040 - 1,  0x30FF,   // hiragana, katakana
    0x3105 - 1,  0x312F,   // bopomofo
    0x3400 - 1,  0x4DBF,   // unified ideographs extension A
    0x4E00 - 1,  0x9FFF,   // unified ideographs
    0xAC00 - 1,  0xD7AF,   // hangul syllables
    0xF900 - 1,  0xFAFF,   // compatibility ideographs
    0x20000 - 1, 0x2EBEF,  // unified ideographs extensions B..F
};

constexpr char32_t kEmojiSplits[] = {
    0x2600 - 1,  0x27BF,   // misc symbols, dingbats
    0x2B00 - 1,  0x2BFF,   // misc symbols and arrows (stars)
    0x1F300 - 1, 0x1F5FF,  // misc symbols and pictographs
    0x1F600 - 1, 0x1F64F,  // emoticons
    0x1F680 - 1, 0x1F6FF,  // transport and map symbols
    0x1F900 - 1, 0x1F9FF,  // supplemental symbols and pictographs
    0x1FA70 - 1, 0x1FAFF,  // symbols and pictographs extended-A
};

bool in_ranges(const char32_t* first, const char32_t* last, char32_t cp) {
  const auto* it = std::lower_bound(first, last, cp);
  return ((it - first) & 1) != 0;
}

}  // namespace

bool is_cjk(char32_t cp) {
  return in_ranges(std::begin(kCjkSplits), std::end(kCjkSplits), cp);
}

bool is_emoji(char32_t cp) {
  return in_ranges(std::begin(kEmojiSplits), std::end(kEmojiSplits), cp);
}

bool contains_emoji(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = decode_at(s, i);
    if (cp != kInvalid && is_emoji(cp)) return true;
  }
  return false;
}

bool contains_question_mark(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const char32_t cp = decode_at(s, i);
    if (cp == U'?' || cp == 0xFF1F) return true;
  }
  return false;
}

}  // namespace adgen::uni
