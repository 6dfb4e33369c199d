#include "moeope/envs/expression.hpp"

#include "moeope/core/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace moeope {

struct Expression::Node {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call };
  Kind kind = Kind::number;
  double value = 0.0;
  std::size_t index = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

std::size_t arity(const std::string& fn) {
  if (fn == "min" || fn == "max" || fn == "pow") return 2;
  if (fn == "exp" || fn == "log" || fn == "log10" || fn == "sqrt" || fn == "abs" || fn == "sin" ||
      fn == "cos" || fn == "tanh")
    return 1;
  return 0;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Node::Kind::add, {lhs, term()});
      else if (eat('-'))
        lhs = make(Node::Kind::sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = make(Node::Kind::mul, {lhs, unary()});
      else if (eat('/'))
        lhs = make(Node::Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Kind::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (eat('^')) return make(Node::Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      auto e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        const std::size_t n_args = arity(name);
        if (n_args == 0) fail("unknown function '" + name + "'");
        std::vector<NodePtr> args{expr()};
        while (eat(',')) args.push_back(expr());
        if (!eat(')')) fail("expected ')'");
        if (args.size() != n_args) fail("wrong number of arguments to '" + name + "'");
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = name;
        n->args = std::move(args);
        return n;
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::variable;
          n->index = i;
          return n;
        }
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, std::span<const double> v) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      return v[n.index];
    case Node::Kind::neg:
      return -eval(*n.args[0], v);
    case Node::Kind::add:
      return eval(*n.args[0], v) + eval(*n.args[1], v);
    case Node::Kind::sub:
      return eval(*n.args[0], v) - eval(*n.args[1], v);
    case Node::Kind::mul:
      return eval(*n.args[0], v) * eval(*n.args[1], v);
    case Node::Kind::div:
      return eval(*n.args[0], v) / eval(*n.args[1], v);
    case Node::Kind::pow:
      return std::pow(eval(*n.args[0], v), eval(*n.args[1], v));
    case Node::Kind::call: {
      const double a = eval(*n.args[0], v);
      if (n.fn == "exp") return std::exp(a);
      if (n.fn == "log") return std::log(a);
      if (n.fn == "log10") return std::log10(a);
      if (n.fn == "sqrt") return std::sqrt(a);
      if (n.fn == "abs") return std::abs(a);
      if (n.fn == "sin") return std::sin(a);
      if (n.fn == "cos") return std::cos(a);
      if (n.fn == "tanh") return std::tanh(a);
      const double b = eval(*n.args[1], v);
      if (n.fn == "min") return std::min(a, b);
      if (n.fn == "max") return std::max(a, b);
      return std::pow(a, b);
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  return Expression(Parser(text, variables).parse(), text);
}

double Expression::evaluate(std::span<const double> values) const { return eval(*root_, values); }

}  // namespace moeope
