#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cellkit {

// Exact arbitrary-precision integer type used for all coefficients.
using Int = boost::multiprecision::cpp_int;

// Sparse Laurent polynomial in one variable v with Int coefficients.
//
// Terms are kept sorted by strictly increasing exponent and never carry a
// zero coefficient; the zero polynomial is the empty term list. All
// arithmetic is exact.
class Laurent {
public:
    // (exponent, coefficient); coefficient is always nonzero.
    using Term = std::pair<int, Int>;

    Laurent() = default; // zero
    Laurent(long long constant);
    explicit Laurent(Int constant);

    // coeff * v^exp (zero if coeff == 0).
    static Laurent monomial(int exp, Int coeff = 1);
    // v^exp
    static Laurent v(int exp = 1);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    // Coefficient of v^exp (zero if absent).
    Int coeff(int exp) const;

    // Degree bounds; both throw user_error on the zero polynomial, which
    // has no well-defined degree.
    int min_degree() const;
    int max_degree() const;

    // The involution v -> v^{-1}.
    Laurent bar() const;

    Laurent& operator+=(const Laurent& rhs);
    Laurent& operator-=(const Laurent& rhs);
    Laurent& operator*=(const Laurent& rhs);

    // *this += p * q without materialising p * q separately.
    void add_scaled(const Laurent& p, const Laurent& q);

    friend Laurent operator+(Laurent lhs, const Laurent& rhs) { return lhs += rhs; }
    friend Laurent operator-(Laurent lhs, const Laurent& rhs) { return lhs -= rhs; }
    friend Laurent operator*(const Laurent& lhs, const Laurent& rhs);
    Laurent operator-() const;

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    // Text form "e1:c1,e2:c2,..." with exponents strictly ascending; the
    // zero polynomial renders as the empty string. parse() accepts exactly
    // this grammar and throws parse_error on anything else.
    std::string str() const;
    static Laurent parse(std::string_view text);

private:
    std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const Laurent& p);

} // namespace cellkit
