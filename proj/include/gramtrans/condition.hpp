#pragma once

// Statement selection conditions:
//
//   expr     := and ( 'or' and )*
//   and      := unary ( 'and' unary )*
//   unary    := 'not' unary | '(' expr ')' | compare
//   compare  := operand ( ( '==' | '!=' | '<' | '>' ) operand )?
//   operand  := field | integer | '"' string '"' | 'true' | 'false'
//
// A bare operand must evaluate to a boolean. '<' and '>' compare integers
// only. There is no arithmetic.

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "gramtrans/data.hpp"
#include "gramtrans/template.hpp"

namespace gramtrans {

class UnknownField : public Error {
 public:
  explicit UnknownField(std::string field)
      : Error("condition references unknown field '" + field + "'"), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ConditionTypeError : public Error {
 public:
  using Error::Error;
};

class Condition {
 public:
  struct Node;

  // Throws ParseError.
  static Condition parse(std::string_view source);

  const std::string& source() const { return source_; }
  std::set<std::string> fields() const;

  // Throws UnknownField or ConditionTypeError. Side-effect free.
  bool evaluate(const DataRecord& data) const;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace gramtrans
