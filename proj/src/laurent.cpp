#include "cellkit/laurent.hpp"

#include "cellkit/errors.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

namespace cellkit {

Laurent::Laurent(long long constant) {
    if (constant != 0)
        terms_.emplace_back(0, Int(constant));
}

Laurent::Laurent(Int constant) {
    if (constant != 0)
        terms_.emplace_back(0, std::move(constant));
}

Laurent Laurent::monomial(int exp, Int coeff) {
    Laurent p;
    if (coeff != 0)
        p.terms_.emplace_back(exp, std::move(coeff));
    return p;
}

Laurent Laurent::v(int exp) {
    return monomial(exp, 1);
}

Int Laurent::coeff(int exp) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                               [](const Term& t, int e) { return t.first < e; });
    if (it != terms_.end() && it->first == exp)
        return it->second;
    return Int(0);
}

int Laurent::min_degree() const {
    if (terms_.empty())
        throw user_error("min_degree: the zero polynomial has no degree");
    return terms_.front().first;
}

int Laurent::max_degree() const {
    if (terms_.empty())
        throw user_error("max_degree: the zero polynomial has no degree");
    return terms_.back().first;
}

Laurent Laurent::bar() const {
    Laurent p;
    p.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
        p.terms_.emplace_back(-it->first, it->second);
    return p;
}

Laurent& Laurent::operator+=(const Laurent& rhs) {
    if (rhs.terms_.empty())
        return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = rhs.terms_.begin(), be = rhs.terms_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            out.push_back(*a++);
        } else if (b->first < a->first) {
            out.push_back(*b++);
        } else {
            Int c = a->second + b->second;
            if (c != 0)
                out.emplace_back(a->first, std::move(c));
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, ae);
    out.insert(out.end(), b, be);
    terms_ = std::move(out);
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& rhs) {
    if (rhs.terms_.empty())
        return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = rhs.terms_.begin(), be = rhs.terms_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            out.push_back(*a++);
        } else if (b->first < a->first) {
            out.emplace_back(b->first, -b->second);
            ++b;
        } else {
            Int c = a->second - b->second;
            if (c != 0)
                out.emplace_back(a->first, std::move(c));
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, ae);
    for (; b != be; ++b)
        out.emplace_back(b->first, -b->second);
    terms_ = std::move(out);
    return *this;
}

void Laurent::add_scaled(const Laurent& p, const Laurent& q) {
    if (p.terms_.empty() || q.terms_.empty())
        return;
    // Accumulate the product over a dense window of exponents, then merge.
    const int lo = p.terms_.front().first + q.terms_.front().first;
    const int hi = p.terms_.back().first + q.terms_.back().first;
    std::vector<Int> dense(static_cast<std::size_t>(hi - lo + 1));
    for (const Term& a : p.terms_)
        for (const Term& b : q.terms_)
            dense[static_cast<std::size_t>(a.first + b.first - lo)] += a.second * b.second;
    Laurent prod;
    for (int e = lo; e <= hi; ++e) {
        Int& c = dense[static_cast<std::size_t>(e - lo)];
        if (c != 0)
            prod.terms_.emplace_back(e, std::move(c));
    }
    *this += prod;
}

Laurent operator*(const Laurent& lhs, const Laurent& rhs) {
    Laurent out;
    out.add_scaled(lhs, rhs);
    return out;
}

Laurent& Laurent::operator*=(const Laurent& rhs) {
    *this = *this * rhs;
    return *this;
}

Laurent Laurent::operator-() const {
    Laurent p;
    p.terms_.reserve(terms_.size());
    for (const Term& t : terms_)
        p.terms_.emplace_back(t.first, -t.second);
    return p;
}

std::string Laurent::str() const {
    std::string out;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first)
            out += ',';
        first = false;
        out += std::to_string(t.first);
        out += ':';
        out += t.second.str();
    }
    return out;
}

namespace {

// Parses a base-10 integer spanning the whole of `text`.
// Grammar: '-'? digit+ (no whitespace, no '+').
bool parse_plain_int_string(std::string_view text, bool& negative, std::string& digits) {
    negative = false;
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') {
        negative = true;
        ++i;
    }
    if (i >= text.size())
        return false;
    for (; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            return false;
    digits.assign(text.substr(negative ? 1 : 0));
    return true;
}

int parse_exponent(std::string_view text) {
    int value = 0;
    const char* last = text.data() + text.size();
    auto res = std::from_chars(text.data(), last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw parse_error("laurent: bad exponent '" + std::string(text) + "'");
    return value;
}

Int parse_coefficient(std::string_view text) {
    bool negative = false;
    std::string digits;
    if (!parse_plain_int_string(text, negative, digits))
        throw parse_error("laurent: bad coefficient '" + std::string(text) + "'");
    Int value(digits);
    if (value == 0)
        throw parse_error("laurent: zero coefficient in term");
    return negative ? Int(-value) : value;
}

} // namespace

Laurent Laurent::parse(std::string_view text) {
    Laurent p;
    if (text.empty())
        return p;
    bool have_prev = false;
    int prev_exp = 0;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        std::string_view token =
            text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        std::size_t colon = token.find(':');
        if (colon == std::string_view::npos || token.find(':', colon + 1) != std::string_view::npos)
            throw parse_error("laurent: term '" + std::string(token) + "' is not 'exp:coeff'");
        int exp = parse_exponent(token.substr(0, colon));
        Int coeff = parse_coefficient(token.substr(colon + 1));
        if (have_prev && exp <= prev_exp)
            throw parse_error("laurent: exponents not strictly ascending");
        have_prev = true;
        prev_exp = exp;
        p.terms_.emplace_back(exp, std::move(coeff));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return p;
}

std::ostream& operator<<(std::ostream& os, const Laurent& p) {
    return os << p.str();
}

} // namespace cellkit
