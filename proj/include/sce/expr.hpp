#pragma once

#include <memory>
#include <span>
#include <string>

namespace sce {

/// Arithmetic expression over inputs x1..x6 (grammar in docs/expr.md).
/// Parsed once into a tree; evaluation is const and safe to call from
/// several threads.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text);

  [[nodiscard]] double operator()(std::span<const double> x) const;

  /// Highest variable index referenced (x3 -> 3), 0 for constants.
  [[nodiscard]] int arity() const noexcept { return arity_; }
  [[nodiscard]] const std::string& text() const noexcept { return text_; }

 private:
  Expression(std::shared_ptr<const Node> root, int arity, std::string text)
      : root_(std::move(root)), arity_(arity), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  int arity_ = 0;
  std::string text_;
};

}  // namespace sce
