#include "bkg/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bkg::expr {

namespace {

struct FunctionEntry {
  std::string_view name;
  Function function;
  std::size_t arity;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Function::Sin, 1},   {"cos", Function::Cos, 1},   {"tan", Function::Tan, 1}, {"exp", Function::Exp, 1},
    {"log", Function::Log, 1},   {"sqrt", Function::Sqrt, 1}, {"pow", Function::Pow, 2},
};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& parameters) : text_(text), params_(parameters) {}

  Node parse() {
    Node n = expression();
    skip_space();
    if (pos_ < text_.size()) fail("expected operator or end of input", "operator");
    return n;
  }

 private:
  // 1-based offset of the current token
  std::size_t offset() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message, std::string expected) const {
    std::ostringstream os;
    os << "syntax error at offset " << offset() << ": " << message;
    throw SyntaxError(os.str(), offset(), std::move(expected));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node expression() {
    Node lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = binary(BinaryOp::Add, std::move(lhs), term());
      else if (accept('-'))
        lhs = binary(BinaryOp::Sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  Node term() {
    Node lhs = power();
    for (;;) {
      if (accept('*'))
        lhs = binary(BinaryOp::Mul, std::move(lhs), power());
      else if (accept('/'))
        lhs = binary(BinaryOp::Div, std::move(lhs), power());
      else
        return lhs;
    }
  }

  Node power() {
    Node base = unary();
    if (accept('^')) return binary(BinaryOp::Pow, std::move(base), power());
    return base;
  }

  Node unary() {
    if (accept('-')) {
      Node n;
      n.kind = NodeKind::Unary;
      n.children.push_back(unary());
      return n;
    }
    if (accept('+')) return unary();
    return primary();
  }

  Node primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected expression", "expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Node inner = expression();
      if (!accept(')')) fail("expected ')'", ")");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("expected expression, found '") + c + "'", "expression");
  }

  Node number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    Node n;
    n.kind = NodeKind::Constant;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, n.value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number", "number");
    }
    return n;
  }

  Node identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      for (const auto& f : kFunctions) {
        if (f.name != name) continue;
        ++pos_;
        Node n;
        n.kind = NodeKind::Call;
        n.function = f.function;
        n.children.push_back(expression());
        for (std::size_t k = 1; k < f.arity; ++k) {
          if (!accept(',')) fail("expected ','", ",");
          n.children.push_back(expression());
        }
        if (!accept(')')) fail("expected ')'", ")");
        return n;
      }
      std::ostringstream os;
      os << "unknown function '" << name << "' at offset " << start + 1;
      throw UnknownIdentifierError(os.str(), name, start + 1);
    }

    for (std::size_t k = 0; k < params_.size(); ++k)
      if (params_[k] == name) {
        Node n;
        n.kind = NodeKind::Parameter;
        n.parameter = k;
        return n;
      }
    if (name == "pi") {
      Node n;
      n.value = std::numbers::pi;
      return n;
    }
    std::ostringstream os;
    os << "unknown identifier '" << name << "' at offset " << start + 1 << "; declared parameters: [";
    for (std::size_t k = 0; k < params_.size(); ++k) os << (k ? ", " : "") << params_[k];
    os << "]";
    throw UnknownIdentifierError(os.str(), name, start + 1);
  }

  static Node binary(BinaryOp op, Node lhs, Node rhs) {
    Node n;
    n.kind = NodeKind::Binary;
    n.op = op;
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
  }

  std::string_view text_;
  const std::vector<std::string>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, std::vector<std::string> parameters) {
  Node root = Parser(text, parameters).parse();
  return Expr(std::move(root), std::move(parameters), std::string(text));
}

double evaluate(const Node& node, std::span<const double> values) {
  switch (node.kind) {
    case NodeKind::Constant:
      return node.value;
    case NodeKind::Parameter:
      if (node.parameter >= values.size()) throw DimensionError("expression: missing parameter value");
      return values[node.parameter];
    case NodeKind::Unary:
      return -evaluate(node.children[0], values);
    case NodeKind::Binary: {
      const double a = evaluate(node.children[0], values);
      const double b = evaluate(node.children[1], values);
      switch (node.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return std::pow(a, b);
      }
      break;
    }
    case NodeKind::Call: {
      const double a = evaluate(node.children[0], values);
      switch (node.function) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Tan: return std::tan(a);
        case Function::Exp: return std::exp(a);
        case Function::Log: return std::log(a);
        case Function::Sqrt: return std::sqrt(a);
        case Function::Pow: return std::pow(a, evaluate(node.children[1], values));
      }
      break;
    }
  }
  throw Error("expression: corrupt node");
}

double Expr::operator()(std::span<const double> values) const { return evaluate(root_, values); }

double Expr::operator()(const std::map<std::string, double>& binding) const {
  std::vector<double> values;
  values.reserve(parameters_.size());
  for (const auto& p : parameters_) {
    const auto it = binding.find(p);
    if (it == binding.end()) throw InputError("expression: no value bound for parameter '" + p + "'");
    values.push_back(it->second);
  }
  return evaluate(root_, values);
}

std::string_view function_name(Function f) {
  for (const auto& e : kFunctions)
    if (e.function == f) return e.name;
  return "?";
}

std::string to_string(const Node& node, const std::vector<std::string>& parameters) {
  switch (node.kind) {
    case NodeKind::Constant: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, node.value);
      std::string s(buf, res.ptr);
      if (node.value < 0 || s == "-0") return "(" + s + ")";
      if (s == "inf" || s == "nan") return "(" + s + ")";
      return s;
    }
    case NodeKind::Parameter:
      return parameters.at(node.parameter);
    case NodeKind::Unary:
      return "(-" + to_string(node.children[0], parameters) + ")";
    case NodeKind::Binary: {
      static constexpr char ops[] = {'+', '-', '*', '/', '^'};
      return "(" + to_string(node.children[0], parameters) + ops[static_cast<int>(node.op)] +
             to_string(node.children[1], parameters) + ")";
    }
    case NodeKind::Call: {
      std::string s(function_name(node.function));
      s += "(";
      for (std::size_t k = 0; k < node.children.size(); ++k)
        s += (k ? "," : "") + to_string(node.children[k], parameters);
      return s + ")";
    }
  }
  return {};
}

}  // namespace bkg::expr
