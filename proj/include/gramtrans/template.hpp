#pragma once

// Statement template DSL.
//
//   template  := ( literal | slot | unit )*
//   literal   := any text; '\' escapes one of  \ { } [ ]
//   slot      := '{' field ( ':' format )? '}'
//   unit      := '[' unit-id ( '|' override ( ',' override )* )? ']'
//   override  := key '=' value
//   value     := '@' field        bind: number=@f sets the agreement source,
//                                 lemma=@f takes the lemma from the data
//              | '-'              clear the feature
//              | bare | '"' quoted '"'
//
//   field, unit-id  [A-Za-z0-9_.-]+ (starting with a letter or '_')
//   format          integer | date-long | weekday | ordinal
//   key             a FeatureSet field name (lemma, case, number, ...)
//   bare            one or more characters other than  , ] | = " \ { } [  and whitespace
//
// List-valued keys (adjectives, conjunctions) separate items with '+'.
// numerals take "<int>" or "<int>:<cardinal|ordinal>"; head_index an integer.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gramtrans/formatting.hpp"
#include "gramtrans/grammar.hpp"

namespace gramtrans {

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

struct DataSlot {
  std::string field;
  SlotFormat format = SlotFormat::plain;
  bool operator==(const DataSlot&) const = default;
};

struct UnitRef {
  std::string unit_id;
  FeatureOverrides overrides;
  // number=@field
  std::optional<std::string> agreement_binding;
  // lemma=@field
  std::optional<std::string> lemma_binding;
  bool operator==(const UnitRef&) const = default;
};

using Segment = std::variant<Literal, DataSlot, UnitRef>;
using Segments = std::vector<Segment>;

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset, std::size_t line, std::size_t column,
             std::vector<std::string> expected);
  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

Segments parse_template(std::string_view text);

// Canonical form: adjacent literals merged, overrides in FeatureSet field
// order, values quoted only when a bare value would not parse back.
std::string serialize_template(const Segments& segments);

// Merges adjacent literals and drops empty ones.
Segments canonicalize(Segments segments);

bool is_identifier(std::string_view s);

}  // namespace gramtrans
