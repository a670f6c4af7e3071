#pragma once

#include "rank1/tower.hpp"

#include <string>

namespace rank1 {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// fail dominates inconclusive dominates pass.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

/// |value - prediction| over both brackets: `worst` is the largest possible
/// deviation, `best` the smallest.
struct Deviation {
  Rational worst;
  Rational best;

  static Deviation between(const MeasureBound& value, const MeasureBound& prediction) {
    Rational lo = value.lo - prediction.hi;
    Rational hi = value.hi - prediction.lo;
    Deviation d;
    d.worst = max(abs(lo), abs(hi));
    d.best = (lo <= 0 && hi >= 0) ? Rational(0) : min(abs(lo), abs(hi));
    return d;
  }

  Verdict judge(const Rational& tol) const {
    if (worst <= tol) return Verdict::pass;
    if (best > tol) return Verdict::fail;
    return Verdict::inconclusive;
  }
};

}  // namespace rank1
