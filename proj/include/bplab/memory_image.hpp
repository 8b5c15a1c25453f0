#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bplab {

// Parse failure in a memory-image document; line is 1-based.
struct ImageError : std::runtime_error {
  int line;
  ImageError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// Flat memory image. Grammar, one directive per line:
//   '#' starts a comment (anywhere in the line)
//   @XXXXXXXX   set the word cursor (8 hex digits, 4-byte aligned)
//   XXXXXXXX    store one little-endian 32-bit word at the cursor, advance 4
// The entry point is the address of the first '@' directive (0 if none).
struct MemoryImage {
  std::map<uint32_t, uint32_t> words;  // word address -> value
  uint32_t entry = 0;

  static MemoryImage parse(std::string_view text) {
    MemoryImage img;
    uint32_t cursor = 0;
    bool entry_set = false;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      const size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                         : eol - pos);
      ++line_no;
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

      if (const size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;

      if (line.front() == '@') {
        const uint32_t addr = parse_hex32(line.substr(1), line_no);
        if (addr % 4 != 0)
          throw ImageError(line_no, "cursor address not 4-byte aligned");
        cursor = addr;
        if (!entry_set) {
          img.entry = addr;
          entry_set = true;
        }
        continue;
      }
      const uint32_t value = parse_hex32(line, line_no);
      if (img.words.count(cursor))
        throw ImageError(line_no, "overlapping regions: word at 0x" +
                                      hex32(cursor) + " written twice");
      img.words.emplace(cursor, value);
      cursor += 4;
    }
    return img;
  }

  static std::string hex32(uint32_t v) {
    static const char* digits = "0123456789ABCDEF";
    std::string s(8, '0');
    for (int i = 7; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
    return s;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                          s.front() == '\r'))
      s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                          s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  static uint32_t parse_hex32(std::string_view tok, int line_no) {
    if (tok.size() != 8)
      throw ImageError(line_no, "expected exactly 8 hex digits, got '" +
                                    std::string(tok) + "'");
    uint32_t v = 0;
    for (char c : tok) {
      v <<= 4;
      if (c >= '0' && c <= '9')
        v |= static_cast<uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f')
        v |= static_cast<uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F')
        v |= static_cast<uint32_t>(c - 'A' + 10);
      else
        throw ImageError(line_no, std::string("invalid hex digit '") + c + "'");
    }
    return v;
  }
};

}  // namespace bplab
