#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace adgen::uni {

// Sentinel returned for malformed UTF-8. Malformed bytes never abort a
// decode; callers may drop or replace them.
inline constexpr char32_t kInvalid = 0x110000;

// Decodes the codepoint starting at s[i] and advances i past it.
// On a malformed sequence, advances i by one byte and returns kInvalid.
char32_t decode_at(std::string_view s, std::size_t& i);

// Full decode; malformed bytes are dropped.
std::vector<char32_t> decode(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

// CJK ideographs and syllabaries (Han, kana, hangul, bopomofo).
// CJK punctuation blocks are deliberately excluded.
bool is_cjk(char32_t cp);

// Pictographic emoji blocks (misc symbols, dingbats, the 1F3xx-1FAxx
// planes). Skin-tone and variation-selector modifiers are not included.
bool is_emoji(char32_t cp);

inline bool is_ascii_alnum(char32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
         (cp >= 'A' && cp <= 'Z');
}

inline char32_t ascii_lower(char32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
}

// True if any codepoint of the (possibly malformed) UTF-8 string is an emoji.
bool contains_emoji(std::string_view s);

// True if the string contains an ASCII '?' or a fullwidth question mark.
bool contains_question_mark(std::string_view s);

}  // namespace adgen::uni
