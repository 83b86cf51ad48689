#include "mti/complexio.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace mti {

namespace {

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

std::optional<Complex> parse_complex(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) return std::nullopt;

  const bool has_i = text.back() == 'i' || text.back() == 'I';
  if (!has_i) {
    double re;
    if (!parse_double(text, re)) return std::nullopt;
    return Complex{re, 0.0};
  }

  text.pop_back();  // strip the trailing i
  // split at the last +/- that is not an exponent sign and not leading
  size_t split = std::string::npos;
  for (size_t k = text.size(); k-- > 1;) {
    const char c = text[k];
    if ((c == '+' || c == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    // pure imaginary: "2i", "i", "-i", "+i"
    std::string im_s = text;
    if (im_s.empty() || im_s == "+") im_s = "1";
    else if (im_s == "-") im_s = "-1";
    double im;
    if (!parse_double(im_s, im)) return std::nullopt;
    return Complex{0.0, im};
  }

  std::string re_s = text.substr(0, split);
  std::string im_s = text.substr(split);  // keeps the sign
  if (im_s == "+") im_s = "1";
  else if (im_s == "-") im_s = "-1";
  double re, im;
  if (!parse_double(re_s, re) || !parse_double(im_s, im)) return std::nullopt;
  return Complex{re, im};
}

std::string format_complex(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace mti
