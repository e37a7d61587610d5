#include "qlpoly/rational.hpp"

#include <algorithm>
#include <numeric>

#include "qlpoly/error.hpp"

namespace qlpoly {

Rational parse_rational(std::string_view text) {
    const std::string s(text);
    const auto slash = s.find('/');
    auto valid_int = [](std::string_view digits, bool allow_sign) {
        if (allow_sign && !digits.empty() && (digits[0] == '-' || digits[0] == '+'))
            digits.remove_prefix(1);
        return !digits.empty() &&
               std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw ParseError("malformed rational \"" + s + "\"");
    Integer p(num[0] == '+' ? num.substr(1) : num, 10);
    Integer q(den, 10);
    if (q == 0) throw ParseError("zero denominator in \"" + s + "\"");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

std::vector<std::size_t> row_reduce(RationalMatrix& rows, const std::vector<std::size_t>& column_order) {
    std::vector<std::size_t> order = column_order;
    if (order.empty() && !rows.empty()) {
        order.resize(rows.front().size());
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (auto col : order) {
        if (r == rows.size()) break;
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const Rational inv = 1 / rows[r][col];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            const Rational f = rows[i][col];
            for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(col);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

std::size_t rank(RationalMatrix rows) { return row_reduce(rows).size(); }

IntegerVector primitive(const RationalVector& v) {
    Integer den = 1;
    for (const auto& x : v) den = lcm(den, Integer(x.get_den()));
    IntegerVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(Integer(x.get_num()) * (den / x.get_den()));
    return primitive(out);
}

IntegerVector primitive(const IntegerVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g == 0) return v;
    IntegerVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x / g);
    return out;
}

RationalVector to_rational(const IntegerVector& v) {
    return RationalVector(v.begin(), v.end());
}

}  // namespace qlpoly
