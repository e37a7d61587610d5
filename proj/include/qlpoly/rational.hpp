#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace qlpoly {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;
using RationalMatrix = std::vector<RationalVector>;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws ParseError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Rank of a rational matrix (rows may be empty or ragged-free).
std::size_t rank(RationalMatrix rows);

/// Reduced row echelon form in place; returns the pivot column of each
/// remaining nonzero row. Zero rows are removed. Columns are scanned in
/// the order given by `column_order` (all columns when empty).
std::vector<std::size_t> row_reduce(RationalMatrix& rows,
                                    const std::vector<std::size_t>& column_order = {});

/// Scales a nonzero vector by a positive rational so its entries are coprime
/// integers. The zero vector maps to zeros.
IntegerVector primitive(const RationalVector& v);
IntegerVector primitive(const IntegerVector& v);

RationalVector to_rational(const IntegerVector& v);

}  // namespace qlpoly
