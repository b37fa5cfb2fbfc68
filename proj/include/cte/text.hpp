// UTF-8 decoding and character-offset helpers.
//
// All annotation offsets in this toolkit are character (code point) offsets
// into the decoded document text; files store the text as raw UTF-8 bytes.

#ifndef CTE_TEXT_HPP
#define CTE_TEXT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cte {

class TextError : public std::runtime_error {
 public:
  explicit TextError(const std::string& what) : std::runtime_error(what) {}
};

// Decodes UTF-8 bytes into code points. Throws TextError on malformed input.
inline std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw TextError("invalid UTF-8 lead byte at byte offset " + std::to_string(i));
    }
    if (i + len > bytes.size())
      throw TextError("truncated UTF-8 sequence at byte offset " + std::to_string(i));
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80)
        throw TextError("invalid UTF-8 continuation at byte offset " + std::to_string(i + k));
      cp = (cp << 6) | (bk & 0x3F);
    }
    // Reject overlong encodings and surrogate range.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000))
      throw TextError("overlong UTF-8 sequence at byte offset " + std::to_string(i));
    if (cp >= 0xD800 && cp <= 0xDFFF)
      throw TextError("UTF-8 encoded surrogate at byte offset " + std::to_string(i));
    if (cp > 0x10FFFF)
      throw TextError("code point out of range at byte offset " + std::to_string(i));
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
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
  return out;
}

// Number of code points in a UTF-8 string. Throws on malformed input.
inline std::size_t utf8_length(std::string_view bytes) {
  return decode_utf8(bytes).size();
}

// Slices [begin, end) in character offsets out of UTF-8 text.
inline std::string utf8_slice(std::string_view bytes, std::size_t begin, std::size_t end) {
  const std::u32string decoded = decode_utf8(bytes);
  if (begin > end || end > decoded.size())
    throw TextError("slice [" + std::to_string(begin) + "," + std::to_string(end) +
                    ") out of range for text of length " + std::to_string(decoded.size()));
  return encode_utf8(std::u32string_view(decoded).substr(begin, end - begin));
}

// Word characters for boundary checks: ASCII alphanumerics, plus everything
// outside ASCII (accented letters in clinical text count as letters).
inline bool is_word_char(char32_t cp) {
  if (cp >= 128) return true;
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
}

// ASCII-only case folding; non-ASCII code points pass through unchanged.
inline char32_t fold_ascii(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
  return cp;
}

inline std::u32string fold_ascii(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& cp : out) cp = fold_ascii(cp);
  return out;
}

inline std::string fold_ascii_utf8(std::string_view bytes) {
  std::string out(bytes);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

}  // namespace cte

#endif  // CTE_TEXT_HPP
