#include "novflow/expression.hpp"

#include "novflow/errors.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <cctype>
#include <cmath>
#include <numbers>

namespace novflow {

namespace {

using Derivative = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using Dual = Eigen::AutoDiffScalar<Derivative>;

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Atan, Exp, Log, Sqrt };

}  // namespace

struct Expression::Node {
    Op op = Op::Const;
    double constant = 0.0;
    int variable = -1;
    std::shared_ptr<const Node> lhs, rhs;

    bool is_constant() const {
        if (op == Op::Var) return false;
        return (!lhs || lhs->is_constant()) && (!rhs || rhs->is_constant());
    }

    template <typename T>
    T eval(const std::vector<T>& vars) const {
        using std::atan, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt, std::tan;
        switch (op) {
            case Op::Const: return T(constant);
            case Op::Var: return vars[static_cast<size_t>(variable)];
            case Op::Add: return lhs->eval(vars) + rhs->eval(vars);
            case Op::Sub: return lhs->eval(vars) - rhs->eval(vars);
            case Op::Mul: return lhs->eval(vars) * rhs->eval(vars);
            case Op::Div: return lhs->eval(vars) / rhs->eval(vars);
            case Op::Neg: return -lhs->eval(vars);
            case Op::Sin: return sin(lhs->eval(vars));
            case Op::Cos: return cos(lhs->eval(vars));
            case Op::Tan: return tan(lhs->eval(vars));
            case Op::Exp: return exp(lhs->eval(vars));
            case Op::Log: return log(lhs->eval(vars));
            case Op::Sqrt: return sqrt(lhs->eval(vars));
            case Op::Atan:
                if constexpr (std::is_same_v<T, double>)
                    return atan(lhs->eval(vars));
                else {
                    const T a = lhs->eval(vars);
                    return T(atan(a.value()), a.derivatives() / (1.0 + a.value() * a.value()));
                }
            case Op::Pow:
                if (rhs->is_constant()) {
                    const double k = rhs->eval(std::vector<double>{});
                    // Integer powers by repeated multiplication keep negative bases exact.
                    if (k == std::round(k) && std::abs(k) <= 16) {
                        const T base = lhs->eval(vars);
                        T out(1.0);
                        for (int i = 0; i < static_cast<int>(std::abs(k)); ++i) out = out * base;
                        return k < 0 ? T(1.0) / out : out;
                    }
                    return pow(lhs->eval(vars), k);
                }
                return exp(rhs->eval(vars) * log(lhs->eval(vars)));
        }
        return T(0.0);
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_constant(double c) {
    auto n = std::make_shared<Expression::Node>();
    n->constant = c;
    return n;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& variables) : s_(text), vars_(variables) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("expression \"" + s_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::Add, lhs, term());
            else if (accept('-')) lhs = make(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return make_constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            static const std::vector<std::pair<std::string, Op>> functions{
                {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan},   {"atan", Op::Atan},
                {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
            for (const auto& [fname, op] : functions)
                if (name == fname) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    NodePtr arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return make(op, arg);
                }
            if (name == "pi") return make_constant(std::numbers::pi);
            if (name == "e") return make_constant(std::numbers::e);
            for (size_t i = 0; i < vars_.size(); ++i)
                if (name == vars_[i]) {
                    auto n = std::make_shared<Expression::Node>();
                    n->op = Op::Var;
                    n->variable = static_cast<int>(i);
                    return n;
                }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : root_(make_constant(0.0)), text_("0") {}

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expression e;
    e.root_ = Parser(text, variables).parse();
    e.text_ = text;
    return e;
}

Expression Expression::constant(double c) {
    Expression e;
    e.root_ = make_constant(c);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    e.text_ = buf;
    return e;
}

bool Expression::is_constant() const { return root_->is_constant(); }

double Expression::value(const Eigen::VectorXd& x) const {
    std::vector<double> vars(x.data(), x.data() + x.size());
    return root_->eval(vars);
}

double Expression::value_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& gradient) const {
    const Eigen::Index n = x.size();
    if (n > 8) throw ValidationError("expressions support at most 8 variables");
    std::vector<Dual> vars;
    vars.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) vars.emplace_back(x(i), static_cast<int>(n), static_cast<int>(i));
    const Dual out = root_->eval(vars);
    gradient = Eigen::VectorXd::Zero(n);
    if (out.derivatives().size() == n) gradient = out.derivatives();
    return out.value();
}

std::vector<std::string> coordinate_names(int n, bool with_t) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    if (with_t) names.push_back("t");
    return names;
}

}  // namespace novflow
