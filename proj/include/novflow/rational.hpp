#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace novflow {

/// Exact rational scalar (GMP backed, expression templates off so it composes with Eigen).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Parses "p", "p/q" or a finite decimal such as "-0.25".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

/// a^n for integer n (a != 0 when n < 0).
Rational rational_pow(const Rational& a, long n);

/// Rank of a dense rational matrix by exact Gaussian elimination.
Eigen::Index exact_rank(RationalMatrix m);

/// Reduced row echelon form; returns the pivot column of each pivot row.
std::vector<Eigen::Index> reduce_row_echelon(RationalMatrix& m);

/// Basis of the right null space, one vector per column of the result.
RationalMatrix null_space(const RationalMatrix& m);

}  // namespace novflow
