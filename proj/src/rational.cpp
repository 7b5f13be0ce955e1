#include "novflow/rational.hpp"

#include <stdexcept>

namespace novflow {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        try {
            return Rational(text);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad rational literal: " + text);
        }
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("bad rational literal: " + text);
    const auto scale = text.size() - dot - 1;
    Rational denom = rational_pow(Rational(10), static_cast<long>(scale));
    try {
        return Rational(digits) / denom;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + text);
    }
}

std::string to_string(const Rational& r) { return r.str(); }

Rational rational_pow(const Rational& a, long n) {
    if (n < 0) {
        if (a == 0) throw std::domain_error("zero raised to a negative power");
        return Rational(1) / rational_pow(a, -n);
    }
    Rational result(1), base(a);
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

std::vector<Eigen::Index> reduce_row_echelon(RationalMatrix& m) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
        Eigen::Index pr = row;
        while (pr < m.rows() && m(pr, col) == 0) ++pr;
        if (pr == m.rows()) continue;
        if (pr != row) m.row(pr).swap(m.row(row));
        const Rational inv = Rational(1) / m(row, col);
        m.row(row) *= inv;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            const Rational f = m(r, col);
            m.row(r) -= f * m.row(row);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

Eigen::Index exact_rank(RationalMatrix m) {
    return static_cast<Eigen::Index>(reduce_row_echelon(m).size());
}

RationalMatrix null_space(const RationalMatrix& m) {
    RationalMatrix r = m;
    const auto pivots = reduce_row_echelon(r);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (auto p : pivots) is_pivot[static_cast<size_t>(p)] = true;
    RationalMatrix basis = RationalMatrix::Zero(m.cols(), m.cols() - static_cast<Eigen::Index>(pivots.size()));
    Eigen::Index k = 0;
    for (Eigen::Index free = 0; free < m.cols(); ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        basis(free, k) = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            basis(pivots[i], k) = -r(static_cast<Eigen::Index>(i), free);
        ++k;
    }
    return basis;
}

}  // namespace novflow
