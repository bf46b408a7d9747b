#include "sce/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "sce/bench.hpp"
#include "sce/error.hpp"
#include "text_util.hpp"

namespace sce {

struct Expression::Node {
  enum class Op { constant, variable, neg, add, sub, mul, div, pow, call };
  enum class Fn { abs, exp, log, sqrt, sin, cos, tan, phi };

  Op op = Op::constant;
  double value = 0.0;
  int variable = 0;  // zero-based
  Fn fn = Fn::abs;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;

  double eval(std::span<const double> x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::variable: return x[static_cast<std::size_t>(variable)];
      case Op::neg: return -lhs->eval(x);
      case Op::add: return lhs->eval(x) + rhs->eval(x);
      case Op::sub: return lhs->eval(x) - rhs->eval(x);
      case Op::mul: return lhs->eval(x) * rhs->eval(x);
      case Op::div: return lhs->eval(x) / rhs->eval(x);
      case Op::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Op::call: {
        const double a = lhs->eval(x);
        switch (fn) {
          case Fn::abs: return std::abs(a);
          case Fn::exp: return std::exp(a);
          case Fn::log: return std::log(a);
          case Fn::sqrt: return std::sqrt(a);
          case Fn::sin: return std::sin(a);
          case Fn::cos: return std::cos(a);
          case Fn::tan: return std::tan(a);
          case Fn::phi: return normal_cdf(a);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected input");
    return root;
  }

  [[nodiscard]] int arity() const noexcept { return arity_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::config_parse, fmt::format("expression '{}': {} at column {}", s_, what, pos_ + 1));
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Op::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = make(Node::Op::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Op::mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = make(Node::Op::div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right-associative; binds tighter than unary minus on its left: -x^2 = -(x^2).
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr inner = expression();
      if (!accept(')')) fail("missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(fmt::format("unexpected '{}'", c));
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        pos_ = look;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    auto n = make(Node::Op::constant);
    n->value = detail::parse_double(s_.substr(start, pos_ - start));
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);

    if (name == "pi" || name == "e") {
      auto n = make(Node::Op::constant);
      n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    if (name == "x" || (name.size() >= 2 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos)) {
      const long index = name == "x" ? 1 : detail::parse_integer(name.substr(1));
      if (index < 1 || index > static_cast<long>(max_dimension)) fail(fmt::format("variable '{}' out of range", name));
      auto n = make(Node::Op::variable);
      n->variable = static_cast<int>(index) - 1;
      arity_ = std::max(arity_, static_cast<int>(index));
      return n;
    }

    static const std::pair<const char*, Node::Fn> functions[] = {
        {"abs", Node::Fn::abs}, {"exp", Node::Fn::exp}, {"log", Node::Fn::log},     {"sqrt", Node::Fn::sqrt},
        {"sin", Node::Fn::sin}, {"cos", Node::Fn::cos}, {"tan", Node::Fn::tan},     {"Phi", Node::Fn::phi},
        {"normcdf", Node::Fn::phi}};
    for (const auto& [fname, fn] : functions) {
      if (name == fname) {
        if (!accept('(')) fail(fmt::format("'{}' needs an argument list", name));
        auto n = make(Node::Op::call, expression());
        n->fn = fn;
        if (!accept(')')) fail("missing ')'");
        return n;
      }
    }
    fail(fmt::format("unknown identifier '{}'", name));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int arity_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser parser(text);
  NodePtr root = parser.parse();
  return Expression(std::shared_ptr<const Node>(std::move(root)), parser.arity(), text);
}

double Expression::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) < arity_) {
    throw Error(ErrorKind::invalid_argument, fmt::format("expression needs {} inputs, got {}", arity_, x.size()));
  }
  return root_->eval(x);
}

}  // namespace sce
