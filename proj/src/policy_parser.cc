#include <algorithm>
#include <cctype>

#include "rfabe/policy.h"

namespace rfabe {
namespace {

bool is_attr_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '.' || c == '-';
}

struct Token {
  enum class Kind { kAttr, kAnd, kOr, kOpen, kClose, kEnd };
  Kind kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::kOpen, "(", i++});
    } else if (c == ')') {
      out.push_back({Token::Kind::kClose, ")", i++});
    } else if (is_attr_char(c)) {
      const std::size_t start = i;
      while (i < text.size() && is_attr_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      Token::Kind kind = Token::Kind::kAttr;
      if (word == "AND") kind = Token::Kind::kAnd;
      if (word == "OR") kind = Token::Kind::kOr;
      out.push_back({kind, std::move(word), start});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Token::Kind::kEnd, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  PolicyAst parse() {
    if (peek().kind == Token::Kind::kEnd) {
      throw ParseError("empty policy", peek().pos);
    }
    PolicyAst ast = parse_or();
    if (peek().kind != Token::Kind::kEnd) {
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    }
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[next_]; }
  const Token& take() { return tokens_[next_++]; }

  PolicyAst parse_or() {
    PolicyAst left = parse_and();
    while (peek().kind == Token::Kind::kOr) {
      take();
      left = PolicyAst::any_of(std::move(left), parse_and());
    }
    return left;
  }

  PolicyAst parse_and() {
    PolicyAst left = parse_atom();
    while (peek().kind == Token::Kind::kAnd) {
      take();
      left = PolicyAst::all_of(std::move(left), parse_atom());
    }
    return left;
  }

  PolicyAst parse_atom() {
    const Token& t = take();
    switch (t.kind) {
      case Token::Kind::kAttr:
        return PolicyAst::leaf(t.text);
      case Token::Kind::kOpen: {
        PolicyAst inner = parse_or();
        if (peek().kind != Token::Kind::kClose) {
          throw ParseError("expected ')'", peek().pos);
        }
        take();
        return inner;
      }
      case Token::Kind::kEnd:
        throw ParseError("unexpected end of policy", t.pos);
      default:
        throw ParseError("expected attribute or '(' but found '" + t.text + "'",
                         t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

bool is_valid_attribute(std::string_view attr) {
  return !attr.empty() && attr != "AND" && attr != "OR" &&
         std::all_of(attr.begin(), attr.end(), is_attr_char);
}

PolicyAst PolicyAst::leaf(std::string attribute) {
  if (!is_valid_attribute(attribute)) {
    throw std::invalid_argument("invalid attribute '" + attribute + "'");
  }
  PolicyAst n;
  n.kind = Kind::kLeaf;
  n.attribute = std::move(attribute);
  return n;
}

PolicyAst PolicyAst::all_of(PolicyAst left, PolicyAst right) {
  PolicyAst n;
  n.kind = Kind::kAnd;
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

PolicyAst PolicyAst::any_of(PolicyAst left, PolicyAst right) {
  PolicyAst n;
  n.kind = Kind::kOr;
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

bool PolicyAst::evaluate(const AttributeSet& attrs) const {
  switch (kind) {
    case Kind::kLeaf:
      return attrs.contains(attribute);
    case Kind::kAnd:
      return children[0].evaluate(attrs) && children[1].evaluate(attrs);
    case Kind::kOr:
      return children[0].evaluate(attrs) || children[1].evaluate(attrs);
  }
  return false;
}

std::string PolicyAst::to_string() const {
  if (kind == Kind::kLeaf) return attribute;
  const char* op = kind == Kind::kAnd ? " AND " : " OR ";
  return "(" + children[0].to_string() + op + children[1].to_string() + ")";
}

std::vector<std::string> PolicyAst::leaves() const {
  if (kind == Kind::kLeaf) return {attribute};
  std::vector<std::string> out = children[0].leaves();
  for (auto& s : children[1].leaves()) out.push_back(std::move(s));
  return out;
}

std::size_t PolicyAst::depth() const {
  if (kind == Kind::kLeaf) return 0;
  return 1 + std::max(children[0].depth(), children[1].depth());
}

PolicyAst parse_policy(std::string_view text) {
  return Parser(tokenize(text)).parse();
}

}  // namespace rfabe
