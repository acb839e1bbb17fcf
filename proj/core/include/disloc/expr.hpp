#pragma once

#include <memory>
#include <string>
#include <vector>

namespace disloc {

/// Small arithmetic expression evaluator for closed-form potentials and
/// sequence terms.  Supports + - * / ^, parentheses, unary minus, numbers,
/// the variables x (alias x1), x2..x4, r = |x|, k (sequence index), and the
/// functions exp, sech, tanh, sin, cos, sqrt, abs.
class Expr {
public:
  struct Node;

  static Expr parse(const std::string& text);
  double eval(const std::vector<double>& x, double k = 0.0) const;
  const std::string& text() const { return text_; }

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

} // namespace disloc
