#include "disloc/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace disloc {

struct Expr::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind;
  double number = 0.0;
  std::string name;
  char op = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos) + ": " + what + " in '" +
                                s + "'");
  }

  NodePtr parse_expression() { return parse_sum(); }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    while (true) {
      skip();
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        const char op = s[pos++];
        NodePtr rhs = parse_product();
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Binary;
        n->op = op;
        n->lhs = lhs;
        n->rhs = rhs;
        lhs = n;
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_power();
    while (true) {
      skip();
      if (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
        const char op = s[pos++];
        NodePtr rhs = parse_power();
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Binary;
        n->op = op;
        n->lhs = lhs;
        n->rhs = rhs;
        lhs = n;
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_power() {
    NodePtr base = parse_unary();
    skip();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      NodePtr exp = parse_power(); // right associative
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Binary;
      n->op = '^';
      n->lhs = base;
      n->rhs = exp;
      return n;
    }
    return base;
  }

  NodePtr parse_unary() {
    skip();
    if (eat('-')) {
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Unary;
      n->op = '-';
      n->lhs = parse_unary();
      return n;
    }
    if (eat('+')) return parse_unary();
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    if (eat('(')) {
      NodePtr inner = parse_expression();
      if (!eat(')')) fail("missing closing parenthesis");
      return inner;
    }
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s.substr(pos), &used);
      pos += used;
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
        ++end;
      std::string name = s.substr(pos, end - pos);
      pos = end;
      skip();
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        NodePtr arg = parse_expression();
        if (!eat(')')) fail("missing closing parenthesis after " + name);
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::Call;
        n->name = std::move(name);
        n->lhs = arg;
        return n;
      }
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Kind::Variable;
      n->name = std::move(name);
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

double eval_node(const Expr::Node& n, const std::vector<double>& x, double k) {
  using Kind = Expr::Node::Kind;
  switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::Variable: {
      if (n.name == "x" || n.name == "x1") {
        if (x.empty()) throw std::invalid_argument("expression uses x without a point");
        return x[0];
      }
      if (n.name == "x2" || n.name == "x3" || n.name == "x4") {
        const std::size_t d = static_cast<std::size_t>(n.name[1] - '1');
        if (d >= x.size())
          throw std::invalid_argument("expression uses " + n.name +
                                      " beyond the dimension");
        return x[d];
      }
      if (n.name == "r") {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
      }
      if (n.name == "k") return k;
      if (n.name == "pi") return 3.14159265358979323846;
      throw std::invalid_argument("unknown variable '" + n.name + "'");
    }
    case Kind::Unary: return -eval_node(*n.lhs, x, k);
    case Kind::Binary: {
      const double a = eval_node(*n.lhs, x, k);
      const double b = eval_node(*n.rhs, x, k);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      throw std::logic_error("bad operator");
    }
    case Kind::Call: {
      const double a = eval_node(*n.lhs, x, k);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "sech") return 1.0 / std::cosh(a);
      if (n.name == "tanh") return std::tanh(a);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "sqrt") return std::sqrt(a);
      if (n.name == "abs") return std::abs(a);
      throw std::invalid_argument("unknown function '" + n.name + "'");
    }
  }
  throw std::logic_error("bad node");
}

} // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  Expr e;
  e.root_ = p.parse_expression();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  e.text_ = text;
  return e;
}

double Expr::eval(const std::vector<double>& x, double k) const {
  if (!root_) throw std::logic_error("empty expression");
  return eval_node(*root_, x, k);
}

} // namespace disloc
