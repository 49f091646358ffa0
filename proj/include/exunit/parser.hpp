#pragma once

/**
 * @file parser.hpp
 * @brief Recursive-descent parser for polynomial text.
 *
 *   expr    := ['-'] term { ('+'|'-') term } ;
 *   term    := factor { '*' factor } ;
 *   factor  := base [ '^' uint ] ;
 *   base    := var | intlit | elemlit | 't' | '(' expr ')' ;
 *   var     := 'x' uint            (1-based)
 *   elemlit := '[' int {',' int} ']' ;
 *
 * Whitespace is ignored; 't' is the ring generator. Implicit multiplication
 * ("2x1") is rejected.
 */

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "exunit/error.hpp"
#include "exunit/number_ring.hpp"
#include "exunit/poly.hpp"

namespace exunit {

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view src, const NumberRing& ring, std::size_t amb) : src_(src), ring_(ring), amb_(amb) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, Errc code = Errc::SyntaxError) const {
    throw ParseError(code, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "', found end of input");
      fail(std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    }
  }

  bool at_digit() {
    skip_ws();
    return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
  }

  std::string digits() {
    if (!at_digit()) fail(pos_ < src_.size() ? std::string("expected digit, found '") + src_[pos_] + "'"
                                             : std::string("expected digit, found end of input"));
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::uint64_t small_uint(Errc overflow_code) {
    std::size_t start = (skip_ws(), pos_);
    std::string d = digits();
    Integer v(d, 10);
    if (v > Integer(2147483647L)) {
      pos_ = start;
      fail("exponent " + d + " exceeds 2^31-1", overflow_code);
    }
    return v.get_ui();
  }

  MultiPoly expr() {
    bool negate = accept('-');
    MultiPoly acc = term();
    if (negate) acc = poly_neg(ring_, acc);
    while (true) {
      if (accept('+'))
        acc = poly_add(acc, term());
      else if (accept('-'))
        acc = poly_sub(ring_, acc, term());
      else
        break;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    while (accept('*')) acc = poly_mul(ring_, acc, factor());
    return acc;
  }

  MultiPoly factor() {
    MultiPoly b = base();
    if (accept('^')) b = poly_pow(ring_, b, small_uint(Errc::ExponentTooLarge));
    return b;
  }

  MultiPoly base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == 'x') {
      const std::size_t start = pos_++;
      if (!(pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))))
        fail("expected variable index after 'x'");
      std::string d = digits();
      Integer idx(d, 10);
      if (idx == 0 || idx > Integer(static_cast<unsigned long>(amb_))) {
        pos_ = start;
        fail("unknown variable x" + d + " (have " + std::to_string(amb_) + ")", Errc::UnknownVariable);
      }
      return MultiPoly::variable(ring_, amb_, idx.get_ui() - 1);
    }
    if (c == 't') {
      ++pos_;
      return MultiPoly::constant(amb_, ring_.theta());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return MultiPoly::constant(amb_, ring_.from_integer(Integer(digits(), 10)));
    if (c == '[') return MultiPoly::constant(amb_, elemlit());
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      expect(')');
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  RingElement elemlit() {
    const std::size_t start = pos_;
    expect('[');
    RingElement r;
    do {
      bool neg = accept('-');
      Integer v(digits(), 10);
      r.coords.push_back(neg ? Integer(-v) : v);
    } while (accept(','));
    expect(']');
    if (r.size() != ring_.degree()) {
      pos_ = start;
      fail("element literal has " + std::to_string(r.size()) + " entries, ring degree is " +
               std::to_string(ring_.degree()),
           Errc::DimensionMismatch);
    }
    return r;
  }

  std::string_view src_;
  const NumberRing& ring_;
  std::size_t amb_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MultiPoly parse_poly(std::string_view src, const NumberRing& ring, std::size_t amb) {
  return detail::PolyParser(src, ring, amb).parse();
}

}  // namespace exunit
