#pragma once
#include <gmpxx.h>

#include <string>

#include "wallx/errors.hpp"

namespace wallx {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long n, long d = 1) {
  if (d == 0) throw ValidationError("rational with zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

// Parses "p", "-p", or "p/q" with arbitrary-size integers.
inline Rat rat_parse(const std::string& s) {
  if (s.empty()) throw ValidationError("empty rational literal");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw ValidationError("bad rational literal: " + s);
  try {
    Rat r(s);
    if (r.get_den() == 0) throw ValidationError("rational with zero denominator: " + s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ValidationError("bad rational literal: " + s);
  }
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline long rat_to_long(const Rat& r, const char* what = "value") {
  if (r.get_den() != 1 || !r.get_num().fits_slong_p())
    throw ValidationError(std::string(what) + " is not a machine integer");
  return r.get_num().get_si();
}

inline Rat rat_factorial(long n) {
  if (n < 0) throw ValidationError("factorial of negative integer");
  Int f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return Rat(f);
}

}  // namespace wallx
