#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "embcalc/errors.hpp"

namespace embcalc {

/* Integers extended by -infinity and +infinity.
 *
 * Used for connectivities and cartesian-ness bounds: a contractible space is
 * +inf-connected, a collar ("handle of index -inf") contributes -inf.
 *
 * Addition follows the usual conventions,
 *   a + (+inf) = +inf for a > -inf,
 *   a + (-inf) = -inf for a < +inf,
 * and (-inf) + (+inf) is rejected (it never has a meaning here).
 */
class ExtInt {
public:
  constexpr ExtInt() : kind_(Kind::finite), value_(0) {}
  constexpr ExtInt(std::int64_t v) : kind_(Kind::finite), value_(v) {}

  static constexpr ExtInt pos_inf() { return ExtInt(Kind::pos_inf); }
  static constexpr ExtInt neg_inf() { return ExtInt(Kind::neg_inf); }

  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  // Finite value; throws on +-inf.
  constexpr std::int64_t value() const {
    if (!is_finite()) throw invalid_argument("ExtInt: value() on an infinite element");
    return value_;
  }

  friend constexpr bool operator==(ExtInt a, ExtInt b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }

  friend constexpr std::strong_ordering operator<=>(ExtInt a, ExtInt b) {
    if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
    if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (a.is_finite() && b.is_finite()) return ExtInt(a.value_ + b.value_);
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
      throw invalid_argument("ExtInt: (-inf) + (+inf) is not defined");
    return (a.is_pos_inf() || b.is_pos_inf()) ? pos_inf() : neg_inf();
  }

  friend constexpr ExtInt operator-(ExtInt a) {
    if (a.is_pos_inf()) return neg_inf();
    if (a.is_neg_inf()) return pos_inf();
    return ExtInt(-a.value_);
  }

  friend constexpr ExtInt operator-(ExtInt a, ExtInt b) { return a + (-b); }

  // Scaling by a positive count (suspension/loop iteration); n >= 1.
  friend constexpr ExtInt operator*(std::int64_t n, ExtInt a) {
    if (n < 1) throw invalid_argument("ExtInt: scaling requires a positive factor");
    return a.is_finite() ? ExtInt(n * a.value_) : a;
  }

  std::string str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    return std::to_string(value_);
  }

private:
  enum class Kind : std::int8_t { neg_inf, finite, pos_inf };

  explicit constexpr ExtInt(Kind k) : kind_(k), value_(0) {}

  static constexpr int rank(Kind k) {
    return k == Kind::neg_inf ? -1 : (k == Kind::finite ? 0 : 1);
  }

  Kind kind_;
  std::int64_t value_;
};

constexpr ExtInt min(ExtInt a, ExtInt b) { return a < b ? a : b; }
constexpr ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }

} // namespace embcalc
