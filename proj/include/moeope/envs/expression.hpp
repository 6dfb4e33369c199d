#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace moeope {

/// Arithmetic expression over named variables.
///
/// Supports + - * / ^, unary minus, parentheses, numeric literals and the
/// functions exp, log, log10, sqrt, abs, sin, cos, tanh, min, max, pow.
class Expression {
 public:
  /// Throws Error on a syntax error or an unknown name.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  /// `values[i]` is the value of variables[i] as given to parse().
  double evaluate(std::span<const double> values) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace moeope
