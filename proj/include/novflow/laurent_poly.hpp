#pragma once

#include "novflow/rational.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>

namespace novflow {

/// Element of Λ = Q[τ, τ⁻¹]. Zero coefficients are never stored, so the zero
/// polynomial is the empty map and equality is structural.
class LaurentPoly {
public:
    using Terms = std::map<long, Rational>;

    LaurentPoly() = default;
    LaurentPoly(int constant);  // NOLINT: Eigen builds literals from ints
    explicit LaurentPoly(const Rational& constant);
    explicit LaurentPoly(Terms terms);

    static LaurentPoly monomial(const Rational& coeff, long exponent);
    static LaurentPoly tau(long exponent = 1) { return monomial(Rational(1), exponent); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Units of Λ are exactly the nonzero monomials c·τ^m.
    bool is_unit() const { return terms_.size() == 1; }

    long min_exponent() const;
    long max_exponent() const;
    /// max − min exponent; this is the Euclidean degree of Λ.
    long span() const { return is_zero() ? -1 : max_exponent() - min_exponent(); }

    Rational coeff(long exponent) const;
    Rational leading_coefficient() const;
    Rational trailing_coefficient() const;
    /// Largest numerator or denominator magnitude, used for pivot tie-breaks.
    Rational height() const;

    Rational evaluate(const Rational& a) const;
    double evaluate(double a) const;

    /// Associate with lowest exponent 0 and leading coefficient 1.
    LaurentPoly normalized() const;
    /// The unit u with *this == u * normalized().
    LaurentPoly unit_part() const;
    /// Inverse of a unit; throws for non-units.
    LaurentPoly unit_inverse() const;

    LaurentPoly shifted(long by) const;

    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly& operator-=(const LaurentPoly& other);
    LaurentPoly& operator*=(const LaurentPoly& other);

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    std::string str(const std::string& var = "t") const;

private:
    void add_term(long exponent, const Rational& c);
    Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

/// Euclidean division in Λ: a = q·b + r with r == 0 or span(r) < span(b).
std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly& a, const LaurentPoly& b);

bool divides(const LaurentPoly& divisor, const LaurentPoly& a);

/// Normalized gcd (0 if both are 0).
LaurentPoly gcd(LaurentPoly a, LaurentPoly b);

/// Parses expressions such as "t^2 - 1", "2t^-1 + 1", "-3/2*t".
LaurentPoly parse_laurent(const std::string& text, char var = 't');

}  // namespace novflow

namespace Eigen {
template <>
struct NumTraits<novflow::LaurentPoly> : GenericNumTraits<novflow::LaurentPoly> {
    using Real = novflow::LaurentPoly;
    using NonInteger = novflow::LaurentPoly;
    using Literal = novflow::LaurentPoly;
    using Nested = novflow::LaurentPoly;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 8,
        MulCost = 32
    };
    // Printing support only; Λ has no floating precision.
    static int digits10() { return 0; }
    static int max_digits10() { return 0; }
};
}  // namespace Eigen
