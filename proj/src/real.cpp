#include "qknot/real.hpp"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "qknot/cplx.hpp"

namespace qk {

std::string Real::dec_string(long digits) const {
  if (digits <= 0) digits = static_cast<long>(mpfr_get_prec(v) * 100 / 332) + 1;
  char* s = nullptr;
  // %.*Rg keeps the shortest faithful form at the requested significance.
  int n = mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v);
  require(n >= 0 && s != nullptr, Status::Invalid, "formatting failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string Real::hex_string() const {
  char* s = nullptr;
  int n = mpfr_asprintf(&s, "%Ra", v);
  require(n >= 0 && s != nullptr, Status::Invalid, "formatting failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Real Real::parse_dec(const std::string& text, mpfr_prec_t prec) {
  Real r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.v, text.c_str(), &end, 10, MPFR_RNDN);
  require(end != text.c_str() && *end == '\0', Status::Invalid,
          "bad decimal number: " + text);
  return r;
}

Real Real::parse_hex(const std::string& text, mpfr_prec_t prec) {
  Real r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.v, text.c_str(), &end, 16, MPFR_RNDN);
  require(end != text.c_str() && *end == '\0', Status::Invalid,
          "bad hex float: " + text);
  return r;
}

Real const_pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.v, MPFR_RNDN);
  return r;
}

Real const_log2(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_log2(r.v, MPFR_RNDN);
  return r;
}

Real const_catalan(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_catalan(r.v, MPFR_RNDN);
  return r;
}

std::string Cplx::json(long bits_field) const {
  long bits = bits_field > 0 ? bits_field : static_cast<long>(prec());
  long digits = bits * 100 / 332 + 1;
  std::ostringstream os;
  os << "{\"re\":\"" << re.dec_string(digits) << "\",\"im\":\"" << im.dec_string(digits)
     << "\",\"bits\":" << bits << "}";
  return os.str();
}

}  // namespace qk
