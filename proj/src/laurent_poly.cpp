#include "novflow/laurent_poly.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace novflow {

namespace {

Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

LaurentPoly::LaurentPoly(int constant) {
    if (constant != 0) terms_.emplace(0, Rational(constant));
}

LaurentPoly::LaurentPoly(const Rational& constant) {
    if (constant != 0) terms_.emplace(0, constant);
}

LaurentPoly::LaurentPoly(Terms terms) {
    for (auto& [e, c] : terms)
        if (c != 0) terms_.emplace(e, std::move(c));
}

LaurentPoly LaurentPoly::monomial(const Rational& coeff, long exponent) {
    LaurentPoly p;
    if (coeff != 0) p.terms_.emplace(exponent, coeff);
    return p;
}

long LaurentPoly::min_exponent() const {
    if (is_zero()) throw std::domain_error("min_exponent of zero polynomial");
    return terms_.begin()->first;
}

long LaurentPoly::max_exponent() const {
    if (is_zero()) throw std::domain_error("max_exponent of zero polynomial");
    return terms_.rbegin()->first;
}

Rational LaurentPoly::coeff(long exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational LaurentPoly::leading_coefficient() const {
    return is_zero() ? Rational(0) : terms_.rbegin()->second;
}

Rational LaurentPoly::trailing_coefficient() const {
    return is_zero() ? Rational(0) : terms_.begin()->second;
}

Rational LaurentPoly::height() const {
    Rational h(0);
    for (const auto& [e, c] : terms_) {
        Rational n = abs_value(Rational(numerator(c)));
        Rational d(denominator(c));
        if (n > h) h = n;
        if (d > h) h = d;
    }
    return h;
}

Rational LaurentPoly::evaluate(const Rational& a) const {
    if (is_zero()) return Rational(0);
    if (a == 0) throw std::domain_error("Laurent polynomial evaluated at 0");
    // Horner on the polynomial part, then the τ^min shift.
    const long lo = min_exponent();
    Rational acc(0);
    long e = max_exponent();
    auto it = terms_.rbegin();
    for (; e >= lo; --e) {
        acc *= a;
        if (it != terms_.rend() && it->first == e) {
            acc += it->second;
            ++it;
        }
    }
    return acc * rational_pow(a, lo);
}

double LaurentPoly::evaluate(double a) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) acc += c.convert_to<double>() * std::pow(a, static_cast<double>(e));
    return acc;
}

LaurentPoly LaurentPoly::normalized() const {
    if (is_zero()) return {};
    const long shift = -min_exponent();
    const Rational lead = leading_coefficient();
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + shift, c / lead);
    return out;
}

LaurentPoly LaurentPoly::unit_part() const {
    if (is_zero()) return {};
    return monomial(leading_coefficient(), min_exponent());
}

LaurentPoly LaurentPoly::unit_inverse() const {
    if (!is_unit()) throw std::domain_error("not a unit in the Laurent ring: " + str());
    const auto& [e, c] = *terms_.begin();
    return monomial(Rational(1) / c, -e);
}

LaurentPoly LaurentPoly::shifted(long by) const {
    LaurentPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + by, c);
    return out;
}

void LaurentPoly::add_term(long exponent, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(exponent, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) {
    *this = *this * other;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
}

LaurentPoly operator-(const LaurentPoly& a) {
    LaurentPoly out;
    for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, -c);
    return out;
}

std::string LaurentPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const long e = it->first;
        Rational c = it->second;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            c = abs_value(c);
        } else if (c < 0 && e != 0 && c == -1) {
            os << "-";
            c = 1;
        }
        first = false;
        if (e == 0) {
            os << c.str();
            continue;
        }
        if (c != 1) os << c.str() << "*";
        os << var;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.str(); }

std::pair<LaurentPoly, LaurentPoly> divmod(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero Laurent polynomial");
    if (a.is_zero()) return {{}, {}};
    // Work with the polynomial parts a = τ^ma·pa, b = τ^mb·pb.
    const long ma = a.min_exponent();
    const long mb = b.min_exponent();
    LaurentPoly rem = a.shifted(-ma);
    const LaurentPoly pb = b.shifted(-mb);
    const long db = pb.max_exponent();
    const Rational lead = pb.leading_coefficient();
    LaurentPoly quot;
    while (!rem.is_zero() && rem.max_exponent() >= db) {
        const long shift = rem.max_exponent() - db;
        const LaurentPoly term = LaurentPoly::monomial(rem.leading_coefficient() / lead, shift);
        quot += term;
        rem -= term * pb;
    }
    return {quot.shifted(ma - mb), rem.shifted(ma)};
}

bool divides(const LaurentPoly& divisor, const LaurentPoly& a) {
    if (divisor.is_zero()) return a.is_zero();
    return divmod(a, divisor).second.is_zero();
}

LaurentPoly gcd(LaurentPoly a, LaurentPoly b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.normalized();
}

LaurentPoly parse_laurent(const std::string& text, char var) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty Laurent polynomial");
    LaurentPoly out;
    size_t i = 0;
    auto fail = [&]() { throw std::invalid_argument("bad Laurent polynomial: " + text); };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/' || s[i] == '.')) ++i;
        Rational coeff(1);
        bool has_coeff = i > start;
        if (has_coeff) coeff = parse_rational(s.substr(start, i - start));
        long exponent = 0;
        if (i < s.size() && s[i] == '*') {
            if (!has_coeff) fail();
            ++i;
        }
        if (i < s.size() && s[i] == var) {
            ++i;
            exponent = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t es = i;
                if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == es) fail();
                exponent = std::stol(s.substr(es, i - es));
            }
        } else if (!has_coeff) {
            fail();
        }
        out += LaurentPoly::monomial(coeff * sign, exponent);
        if (i < s.size() && s[i] != '+' && s[i] != '-') fail();
    }
    return out;
}

}  // namespace novflow
