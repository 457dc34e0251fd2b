#include "gramtrans/template.hpp"

#include <algorithm>
#include <charconv>

namespace gramtrans {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '-'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_literal_special(char c) { return c == '\\' || c == '{' || c == '}' || c == '[' || c == ']'; }
bool is_bare_char(char c) {
  return !is_space(c) && c != ',' && c != ']' && c != '|' && c != '=' && c != '"' && c != '\\' && c != '{' &&
         c != '}' && c != '[';
}

enum class RawKind { text, binding, clear };

struct RawValue {
  RawKind kind = RawKind::text;
  std::string text;
  std::size_t offset = 0;
};

class TemplateParser {
 public:
  explicit TemplateParser(std::string_view src) : src_(src) {}

  Segments parse() {
    Segments out;
    std::string literal;
    while (!at_end()) {
      const char c = peek();
      if (c == '{' || c == '[') {
        if (!literal.empty()) out.push_back(Literal{std::move(literal)});
        literal.clear();
        if (c == '{') {
          out.push_back(parse_slot());
        } else {
          out.push_back(parse_unit());
        }
      } else if (c == '\\') {
        const auto at = pos_;
        ++pos_;
        if (at_end() || !is_literal_special(peek())) {
          fail_at(at, "invalid escape", {"'\\\\'", "'\\{'", "'\\}'", "'\\['", "'\\]'"});
        }
        literal += src_[pos_++];
      } else if (c == '}' || c == ']') {
        fail_at(pos_, std::string("unexpected '") + c + "'", {"literal text", "'{'", "'['"});
      } else {
        literal += src_[pos_++];
      }
    }
    if (!literal.empty()) out.push_back(Literal{std::move(literal)});
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& what, std::vector<std::string> expected) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = what + " at " + std::to_string(line) + ":" + std::to_string(column) + " (offset " +
                          std::to_string(offset) + ")";
    if (!expected.empty()) message += ", expected " + join_expected(expected);
    throw ParseError(std::move(message), offset, line, column, std::move(expected));
  }

  std::string identifier(const char* what) {
    const auto start = pos_;
    if (at_end() || !is_ident_start(peek())) fail_at(pos_, std::string("missing ") + what, {what});
    while (!at_end() && is_ident_char(peek())) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  DataSlot parse_slot() {
    const auto open = pos_++;
    DataSlot slot;
    if (at_end()) fail_at(open, "unterminated data slot", {"field name"});
    slot.field = identifier("field name");
    if (at_end()) fail_at(open, "unterminated data slot", {"':'", "'}'"});
    if (peek() == ':') {
      ++pos_;
      const auto start = pos_;
      while (!at_end() && (is_ident_char(peek()))) ++pos_;
      const auto name = src_.substr(start, pos_ - start);
      if (name.empty()) fail_at(start, "missing slot format", {"integer", "date-long", "weekday", "ordinal"});
      try {
        slot.format = parse_slot_format(name);
      } catch (const FormatError&) {
        fail_at(start, "unknown slot format '" + std::string(name) + "'",
                {"integer", "date-long", "weekday", "ordinal"});
      }
      if (slot.format == SlotFormat::plain) {
        fail_at(start, "missing slot format", {"integer", "date-long", "weekday", "ordinal"});
      }
    }
    if (at_end()) fail_at(open, "unterminated data slot", {"'}'"});
    if (peek() != '}') fail_at(pos_, "unexpected character in data slot", {"':'", "'}'"});
    ++pos_;
    return slot;
  }

  UnitRef parse_unit() {
    const auto open = pos_++;
    UnitRef ref;
    if (at_end()) fail_at(open, "unterminated unit reference", {"unit id"});
    ref.unit_id = identifier("unit id");
    if (at_end()) fail_at(open, "unterminated unit reference", {"']'", "'|'"});
    std::vector<std::string> seen;
    if (peek() == '|') {
      ++pos_;
      while (true) {
        if (at_end()) fail_at(open, "unterminated unit reference", {"feature name"});
        const auto key_at = pos_;
        std::string key = identifier("feature name");
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
          fail_at(key_at, "duplicate override '" + key + "'", {});
        }
        seen.push_back(key);
        if (at_end()) fail_at(open, "unterminated unit reference", {"'='"});
        if (peek() != '=') fail_at(pos_, "unexpected character after '" + key + "'", {"'='"});
        ++pos_;
        if (at_end()) fail_at(open, "unterminated unit reference", {"value"});
        RawValue value = parse_value();
        apply(ref, key, key_at, value);
        if (at_end()) fail_at(open, "unterminated unit reference", {"','", "']'"});
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    if (at_end()) fail_at(open, "unterminated unit reference", {"']'"});
    if (peek() != ']') fail_at(pos_, "unexpected character in unit reference", {"','", "'|'", "']'"});
    ++pos_;
    return ref;
  }

  RawValue parse_value() {
    RawValue v;
    v.offset = pos_;
    if (peek() == '"') {
      const auto open = pos_++;
      while (true) {
        if (at_end()) fail_at(open, "unterminated quoted value", {"'\"'"});
        char c = src_[pos_++];
        if (c == '"') break;
        if (c == '\\') {
          if (at_end()) fail_at(open, "unterminated quoted value", {"'\"'"});
          c = src_[pos_++];
        }
        v.text += c;
      }
      return v;
    }
    if (peek() == '@') {
      ++pos_;
      v.kind = RawKind::binding;
      v.text = identifier("field name");
      return v;
    }
    const auto start = pos_;
    while (!at_end() && is_bare_char(peek())) ++pos_;
    v.text = std::string(src_.substr(start, pos_ - start));
    if (v.text.empty()) fail_at(start, "missing value", {"value", "'@'", "'\"'"});
    if (v.text == "-") v.kind = RawKind::clear;
    return v;
  }

  template <class T, class Fn>
  void assign(Override<T>& target, const RawValue& v, const std::string& key, Fn&& convert) {
    if (v.kind == RawKind::clear) {
      target = Override<T>::clear();
      return;
    }
    if (v.kind == RawKind::binding) fail_at(v.offset, "'" + key + "' cannot bind a data field", {});
    try {
      target = Override<T>::set(convert(v.text));
    } catch (const FormatError& e) {
      fail_at(v.offset, e.what(), {});
    }
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto plus = s.find('+', start);
      out.push_back(s.substr(start, plus - start));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    return out;
  }

  static std::int64_t to_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("invalid integer '" + std::string(s) + "'");
    return v;
  }

  void apply(UnitRef& ref, const std::string& key, std::size_t key_at, const RawValue& v) {
    FeatureOverrides& o = ref.overrides;
    auto str = [](const std::string& s) { return s; };
    if (key == "lemma") {
      if (v.kind == RawKind::binding) {
        ref.lemma_binding = v.text;
        return;
      }
      if (v.kind == RawKind::clear) fail_at(v.offset, "lemma cannot be cleared", {});
      assign(o.lemma, v, key, str);
    } else if (key == "number") {
      if (v.kind == RawKind::binding) {
        ref.agreement_binding = v.text;
        return;
      }
      assign(o.number, v, key, [](const std::string& s) { return parse_number(s); });
    } else if (key == "case") {
      assign(o.grammatical_case, v, key, [](const std::string& s) { return parse_case(s); });
    } else if (key == "tense") {
      assign(o.tense, v, key, [](const std::string& s) { return parse_tense(s); });
    } else if (key == "person") {
      assign(o.person, v, key, [](const std::string& s) { return parse_person(s); });
    } else if (key == "gender") {
      assign(o.gender, v, key, [](const std::string& s) { return parse_gender(s); });
    } else if (key == "preposition") {
      assign(o.preposition, v, key, str);
    } else if (key == "adjectives") {
      assign(o.adjectives, v, key, split_list);
    } else if (key == "numerals") {
      assign(o.numerals, v, key, [](const std::string& s) {
        Numeral n;
        auto colon = s.find(':');
        n.value = to_int(std::string_view(s).substr(0, colon));
        if (colon != std::string::npos) n.type = parse_numeral_type(s.substr(colon + 1));
        return n;
      });
    } else if (key == "conjunctions") {
      assign(o.conjunctions, v, key, split_list);
    } else if (key == "determiner") {
      assign(o.determiner, v, key, [](const std::string& s) { return parse_determiner(s); });
    } else if (key == "pronoun_type") {
      assign(o.pronoun_type, v, key, [](const std::string& s) { return parse_pronoun_type(s); });
    } else if (key == "head_index") {
      assign(o.head_index, v, key, [](const std::string& s) {
        auto i = to_int(s);
        if (i < 0) throw FormatError("head_index must not be negative");
        return static_cast<std::size_t>(i);
      });
    } else {
      fail_at(key_at, "unknown feature '" + key + "'",
              {"lemma", "case", "number", "tense", "person", "gender", "preposition", "adjectives", "numerals",
               "conjunctions", "determiner", "pronoun_type", "head_index"});
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---- serialization -------------------------------------------------------

std::string escape_literal(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (is_literal_special(c)) out += '\\';
    out += c;
  }
  return out;
}

std::string encode_value(std::string_view s) {
  bool bare = !s.empty() && s != "-" && s.front() != '@';
  for (char c : s) bare = bare && is_bare_char(c);
  if (bare) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += '+';
    out += items[i];
  }
  return out;
}

class OverrideWriter {
 public:
  template <class T, class Fn>
  void add(const char* key, const Override<T>& o, Fn&& encode) {
    if (o.clears()) parts_.push_back(std::string(key) + "=-");
    if (o.sets()) parts_.push_back(std::string(key) + "=" + encode_value(encode(o.value())));
  }
  void bind(const char* key, const std::string& field) { parts_.push_back(std::string(key) + "=@" + field); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      out += i ? "," : "|";
      out += parts_[i];
    }
    return out;
  }

 private:
  std::vector<std::string> parts_;
};

std::string serialize_unit(const UnitRef& ref) {
  const FeatureOverrides& o = ref.overrides;
  OverrideWriter w;
  auto same = [](const std::string& s) { return s; };
  auto name = [](auto v) { return std::string(to_string(v)); };
  if (ref.lemma_binding) {
    w.bind("lemma", *ref.lemma_binding);
  } else {
    w.add("lemma", o.lemma, same);
  }
  w.add("case", o.grammatical_case, name);
  if (ref.agreement_binding) {
    w.bind("number", *ref.agreement_binding);
  } else {
    w.add("number", o.number, name);
  }
  w.add("tense", o.tense, name);
  w.add("person", o.person, name);
  w.add("gender", o.gender, name);
  w.add("preposition", o.preposition, same);
  w.add("adjectives", o.adjectives, join_list);
  w.add("numerals", o.numerals, [](const Numeral& n) {
    return std::to_string(n.value) + (n.type == NumeralType::ordinal ? ":ordinal" : "");
  });
  w.add("conjunctions", o.conjunctions, join_list);
  w.add("determiner", o.determiner, name);
  w.add("pronoun_type", o.pronoun_type, name);
  w.add("head_index", o.head_index, [](std::size_t i) { return std::to_string(i); });
  return "[" + ref.unit_id + w.str() + "]";
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::size_t line, std::size_t column,
                       std::vector<std::string> expected)
    : Error(std::move(message)), offset_(offset), line_(line), column_(column), expected_(std::move(expected)) {}

Segments parse_template(std::string_view text) { return TemplateParser(text).parse(); }

Segments canonicalize(Segments segments) {
  Segments out;
  for (auto& s : segments) {
    if (auto* lit = std::get_if<Literal>(&s)) {
      if (lit->text.empty()) continue;
      if (!out.empty()) {
        if (auto* prev = std::get_if<Literal>(&out.back())) {
          prev->text += lit->text;
          continue;
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string serialize_template(const Segments& segments) {
  std::string out;
  for (const auto& segment : canonicalize(segments)) {
    if (auto* lit = std::get_if<Literal>(&segment)) {
      out += escape_literal(lit->text);
    } else if (auto* slot = std::get_if<DataSlot>(&segment)) {
      out += "{" + slot->field;
      if (slot->format != SlotFormat::plain) out += ":" + std::string(to_string(slot->format));
      out += "}";
    } else {
      out += serialize_unit(std::get<UnitRef>(segment));
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

}  // namespace gramtrans
