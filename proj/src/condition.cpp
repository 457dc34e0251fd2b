#include "gramtrans/condition.hpp"

#include <charconv>
#include <vector>

namespace gramtrans {

struct Condition::Node {
  enum class Kind { constant, field, negate, conjunction, disjunction, equal, not_equal, less, greater };
  Kind kind = Kind::constant;
  Value constant;
  std::string field;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Condition::Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Tok { ident, integer, string, lparen, rparen, eq, ne, lt, gt, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class ConditionParser {
 public:
  explicit ConditionParser(std::string_view src) : src_(src) { lex(); }

  NodePtr parse() {
    auto root = expr();
    if (cur().kind != Tok::end) fail(cur().offset, "unexpected '" + cur().text + "'", {"'and'", "'or'", "end"});
    return root;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, const std::string& what, std::vector<std::string> expected) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("condition: " + what + " at " + std::to_string(line) + ":" + std::to_string(column), offset,
                     line, column, std::move(expected));
  }

  static bool ident_char(char c, bool first) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || (!first && c >= '0' && c <= '9');
  }

  void lex() {
    std::size_t i = 0;
    while (i < src_.size()) {
      const char c = src_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.push_back({c == '(' ? Tok::lparen : Tok::rparen, std::string(1, c), i++});
      } else if (c == '=' || c == '!') {
        if (i + 1 >= src_.size() || src_[i + 1] != '=') fail(i, std::string("stray '") + c + "'", {"'=='", "'!='"});
        tokens_.push_back({c == '=' ? Tok::eq : Tok::ne, std::string(src_.substr(i, 2)), i});
        i += 2;
      } else if (c == '<' || c == '>') {
        tokens_.push_back({c == '<' ? Tok::lt : Tok::gt, std::string(1, c), i++});
      } else if (c == '"') {
        const auto start = i++;
        std::string text;
        while (true) {
          if (i >= src_.size()) fail(start, "unterminated string", {"'\"'"});
          char d = src_[i++];
          if (d == '"') break;
          if (d == '\\' && i < src_.size()) d = src_[i++];
          text += d;
        }
        tokens_.push_back({Tok::string, text, start});
      } else if ((c >= '0' && c <= '9') || c == '-') {
        const auto start = i++;
        while (i < src_.size() && src_[i] >= '0' && src_[i] <= '9') ++i;
        tokens_.push_back({Tok::integer, std::string(src_.substr(start, i - start)), start});
      } else if (ident_char(c, true)) {
        const auto start = i;
        while (i < src_.size() && ident_char(src_[i], false)) ++i;
        tokens_.push_back({Tok::ident, std::string(src_.substr(start, i - start)), start});
      } else {
        fail(i, std::string("unexpected character '") + c + "'", {"operand", "operator"});
      }
    }
    tokens_.push_back({Tok::end, "end of input", src_.size()});
  }

  const Token& cur() const { return tokens_[pos_]; }
  bool keyword(std::string_view word) const { return cur().kind == Tok::ident && cur().text == word; }

  static NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr expr() {
    auto lhs = conjunction();
    while (keyword("or")) {
      ++pos_;
      lhs = make(Node::Kind::disjunction, lhs, conjunction());
    }
    return lhs;
  }

  NodePtr conjunction() {
    auto lhs = unary();
    while (keyword("and")) {
      ++pos_;
      lhs = make(Node::Kind::conjunction, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (keyword("not")) {
      ++pos_;
      return make(Node::Kind::negate, unary());
    }
    if (cur().kind == Tok::lparen) {
      const auto open = cur().offset;
      ++pos_;
      auto inner = expr();
      if (cur().kind != Tok::rparen) fail(open, "unclosed '('", {"')'"});
      ++pos_;
      return inner;
    }
    return compare();
  }

  NodePtr compare() {
    auto lhs = operand();
    Node::Kind kind;
    switch (cur().kind) {
      case Tok::eq: kind = Node::Kind::equal; break;
      case Tok::ne: kind = Node::Kind::not_equal; break;
      case Tok::lt: kind = Node::Kind::less; break;
      case Tok::gt: kind = Node::Kind::greater; break;
      default: return lhs;
    }
    ++pos_;
    return make(kind, lhs, operand());
  }

  NodePtr operand() {
    const Token& t = cur();
    auto n = std::make_shared<Node>();
    switch (t.kind) {
      case Tok::integer: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail(t.offset, "invalid integer", {"integer"});
        n->constant = v;
        break;
      }
      case Tok::string: n->constant = t.text; break;
      case Tok::ident:
        if (t.text == "true" || t.text == "false") {
          n->constant = t.text == "true";
        } else if (t.text == "and" || t.text == "or" || t.text == "not") {
          fail(t.offset, "unexpected '" + t.text + "'", {"operand"});
        } else {
          n->kind = Node::Kind::field;
          n->field = t.text;
        }
        break;
      default: fail(t.offset, "unexpected " + t.text, {"field", "integer", "string", "true", "false", "'('"});
    }
    ++pos_;
    return n;
  }

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void collect_fields(const Node& n, std::set<std::string>& out) {
  if (n.kind == Node::Kind::field) out.insert(n.field);
  if (n.lhs) collect_fields(*n.lhs, out);
  if (n.rhs) collect_fields(*n.rhs, out);
}

Value value_of(const Node& n, const DataRecord& data);

bool truth(const Node& n, const DataRecord& data);

Value value_of(const Node& n, const DataRecord& data) {
  switch (n.kind) {
    case Node::Kind::constant: return n.constant;
    case Node::Kind::field: {
      const Value* v = data.find(n.field);
      if (!v) throw UnknownField(n.field);
      return *v;
    }
    default: return truth(n, data);
  }
}

const char* type_name(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return "integer";
  if (std::holds_alternative<bool>(v)) return "boolean";
  return "string";
}

bool truth(const Node& n, const DataRecord& data) {
  switch (n.kind) {
    case Node::Kind::negate: return !truth(*n.lhs, data);
    case Node::Kind::conjunction: return truth(*n.lhs, data) && truth(*n.rhs, data);
    case Node::Kind::disjunction: return truth(*n.lhs, data) || truth(*n.rhs, data);
    case Node::Kind::equal:
    case Node::Kind::not_equal:
    case Node::Kind::less:
    case Node::Kind::greater: {
      const Value a = value_of(*n.lhs, data);
      const Value b = value_of(*n.rhs, data);
      if (a.index() != b.index()) {
        throw ConditionTypeError(std::string("cannot compare ") + type_name(a) + " with " + type_name(b));
      }
      if (n.kind == Node::Kind::equal) return a == b;
      if (n.kind == Node::Kind::not_equal) return a != b;
      if (!std::holds_alternative<std::int64_t>(a)) {
        throw ConditionTypeError(std::string("'<' and '>' need integers, got ") + type_name(a));
      }
      return n.kind == Node::Kind::less ? a < b : a > b;
    }
    case Node::Kind::constant:
    case Node::Kind::field: {
      const Value v = value_of(n, data);
      if (auto b = std::get_if<bool>(&v)) return *b;
      throw ConditionTypeError(std::string("expected a boolean, got ") + type_name(v));
    }
  }
  return false;
}

}  // namespace

Condition Condition::parse(std::string_view source) {
  Condition c;
  c.source_ = std::string(source);
  c.root_ = ConditionParser(source).parse();
  return c;
}

std::set<std::string> Condition::fields() const {
  std::set<std::string> out;
  if (root_) collect_fields(*root_, out);
  return out;
}

bool Condition::evaluate(const DataRecord& data) const { return root_ ? truth(*root_, data) : true; }

}  // namespace gramtrans
