#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bkg/errors.hpp"

namespace bkg::expr {

enum class NodeKind { Constant, Parameter, Unary, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Pow };

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;          // Constant
  std::size_t parameter = 0;   // Parameter slot
  BinaryOp op = BinaryOp::Add;  // Binary
  Function function = Function::Sin;
  std::vector<Node> children;

  bool operator==(const Node&) const = default;
};

/// Parse failure, carrying the 1-based character offset of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset, std::string expected)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifierError : public Error {
 public:
  UnknownIdentifierError(const std::string& what, std::string name, std::size_t offset)
      : Error(what), name_(std::move(name)), offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

/// A parsed expression bound to an ordered list of parameter names.
class Expr {
 public:
  Expr() = default;
  Expr(Node root, std::vector<std::string> parameters, std::string source)
      : root_(std::move(root)), parameters_(std::move(parameters)), source_(std::move(source)) {}

  const Node& root() const noexcept { return root_; }
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  const std::string& source() const noexcept { return source_; }

  /// Values in the order of parameters().
  double operator()(std::span<const double> values) const;
  double operator()(const std::map<std::string, double>& binding) const;

 private:
  Node root_;
  std::vector<std::string> parameters_;
  std::string source_;
};

/// Recursive-descent parser. Precedence from loosest: + -, * /, ^ (right associative),
/// unary minus; parentheses group. Functions: sin cos tan exp log sqrt pow(a, b).
/// The identifier `pi` is a constant unless declared as a parameter.
Expr parse_expression(std::string_view text, std::vector<std::string> parameters = {});

double evaluate(const Node& node, std::span<const double> values);

/// Fully parenthesized text that parses back to the same tree.
std::string to_string(const Node& node, const std::vector<std::string>& parameters);

std::string_view function_name(Function f);

}  // namespace bkg::expr
