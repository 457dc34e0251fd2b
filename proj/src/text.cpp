#include "gramtrans/text.hpp"

#include <cstdint>

namespace gramtrans::text {

namespace {

struct Decoded {
  char32_t cp;
  std::size_t length;
};

Decoded decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> std::uint32_t {
    if (i + k >= s.size()) return 0x100;
    auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : 0x100;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    auto c1 = cont(1);
    if (c1 < 0x100) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    auto c1 = cont(1), c2 = cont(2);
    if (c1 < 0x100 && c2 < 0x100) return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    auto c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 < 0x100 && c2 < 0x100 && c3 < 0x100) {
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
  }
  return {0xFFFD, 1};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Latin Extended-A alternates upper/lower in runs with two phase shifts.
bool extended_a_upper(char32_t cp) {
  if (cp >= 0x100 && cp <= 0x137) return cp % 2 == 0;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0;
  if (cp >= 0x179 && cp <= 0x17E) return cp % 2 == 1;
  return false;
}

bool extended_a_lower(char32_t cp) {
  if (cp >= 0x100 && cp <= 0x137) return cp % 2 == 1;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 0;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 1;
  if (cp >= 0x179 && cp <= 0x17E) return cp % 2 == 0;
  return false;
}

char32_t upper(char32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 32;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 32;
  if (extended_a_lower(cp)) return cp - 1;
  return cp;
}

char32_t lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (extended_a_upper(cp)) return cp + 1;
  return cp;
}

template <class Map>
std::string map_first(std::string_view s, Map&& map) {
  if (s.empty()) return {};
  auto d = decode(s, 0);
  std::string out;
  encode(map(d.cp), out);
  out.append(s.substr(d.length));
  return out;
}

}  // namespace

std::string to_upper_first(std::string_view s) { return map_first(s, upper); }
std::string to_lower_first(std::string_view s) { return map_first(s, lower); }

std::string to_lower(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    auto d = decode(s, i);
    encode(lower(d.cp), out);
    i += d.length;
  }
  return out;
}

bool equal_ignoring_case(std::string_view a, std::string_view b) { return to_lower(a) == to_lower(b); }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++n) i += decode(s, i).length;
  return n;
}

}  // namespace gramtrans::text
