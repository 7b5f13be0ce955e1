#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace novflow {

/// Arithmetic expression over named variables: + - * / ^, unary minus,
/// sin cos tan atan exp log sqrt, constants pi and e. Gradients come from
/// forward-mode differentiation, not finite differences.
class Expression {
public:
    struct Node;

    Expression();  // the constant 0
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);
    static Expression constant(double c);

    const std::string& text() const { return text_; }
    bool is_constant() const;

    double value(const Eigen::VectorXd& x) const;
    double value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& gradient) const;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Variable names x1..xn, followed by t when with_t is set.
std::vector<std::string> coordinate_names(int n, bool with_t);

}  // namespace novflow
