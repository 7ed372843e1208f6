#pragma once

#include <cctype>
#include <string>

#include "fatou/core.hpp"

namespace fatou::detail {

/// Parses complex literals: "1.5", "-0.2i", "0.3+0.1i", "i", "-i", "2-i".
inline cplx parse_complex(const std::string& tok) {
  std::string s;
  for (char c : tok)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  require(!s.empty(), "empty complex literal");

  auto read_part = [&](std::size_t& p) -> std::pair<double, bool> {
    std::size_t start = p;
    if (p < s.size() && (s[p] == '+' || s[p] == '-')) ++p;
    std::size_t digits_begin = p;
    while (p < s.size() && (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '.')) ++p;
    if (p < s.size() && (s[p] == 'e' || s[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < s.size() && (s[q] == '+' || s[q] == '-')) ++q;
      if (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) {
        ++p;
        while (p < s.size() && (std::isdigit(static_cast<unsigned char>(s[p])) || s[p] == '+' || s[p] == '-'))
          ++p;
      }
    }
    bool imag = false;
    double mag;
    if (p < s.size() && (s[p] == 'i' || s[p] == 'I')) {
      imag = true;
      if (digits_begin == p) {  // bare "i" / "+i" / "-i"
        mag = (s[start] == '-') ? -1.0 : 1.0;
      } else {
        mag = std::stod(s.substr(start, p - start));
      }
      ++p;
    } else {
      require(digits_begin != p, "bad complex literal: " + tok);
      mag = std::stod(s.substr(start, p - start));
    }
    return {mag, imag};
  };

  std::size_t p = 0;
  double re = 0, im = 0;
  auto [v1, i1] = read_part(p);
  (i1 ? im : re) = v1;
  if (p < s.size()) {
    require(s[p] == '+' || s[p] == '-', "bad complex literal: " + tok);
    auto [v2, i2] = read_part(p);
    require(i2 != i1, "bad complex literal: " + tok);
    (i2 ? im : re) = v2;
  }
  require(p == s.size(), "bad complex literal: " + tok);
  return {re, im};
}

}  // namespace fatou::detail
