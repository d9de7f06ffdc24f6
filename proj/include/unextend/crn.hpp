#pragma once

#include "unextend/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace unextend {

enum class Bit : int { zero = 0, one = 1 };

constexpr int to_int(Bit b) { return static_cast<int>(b); }
constexpr Bit flipped(Bit b) { return b == Bit::zero ? Bit::one : Bit::zero; }

/// A constructive real number: a total, deterministic map from a precision
/// index k to a rational approximant within 2^-k of the represented value.
///
/// Values are immutable once built and cheap to copy (shared state).
/// Approximants are memoized behind a lock, so a Crn may be queried from
/// several threads at once. Equality of two Crn values is never decided;
/// only approximants are observable.
class Crn {
 public:
  using Approximant = std::function<Rational(unsigned)>;

  // Constant embedding of a rational: approximant(k) == q at every k.
  static Crn from_rational(Rational q, std::string label = {});

  // The caller promises |value - fn(k)| < 2^-k for every k.
  static Crn from_approximant(Approximant fn, std::string label = {});

  // The k-th rational approximant. Memoized per (value, k).
  Rational approx(unsigned k) const;

  // Free-form diagnostic tag, no semantic content.
  const std::string& label() const;

  // approximant(k) = a(k+1) + b(k+1), so the error budget 2^-(k+1) + 2^-(k+1)
  // stays within 2^-k.
  friend Crn operator+(const Crn& a, const Crn& b);

  // approximant(k) = -a(k); the modulus is preserved exactly.
  friend Crn operator-(const Crn& a);

  // approximant(k) = a(k+s) * b(k+s) where the shift s absorbs an integer
  // bound B on both factors, 2^s >= 2B + 1.
  friend Crn operator*(const Crn& a, const Crn& b);

 private:
  struct State;
  explicit Crn(std::shared_ptr<State> state);
  std::shared_ptr<State> state_;
};

/// One step of the approximation algorithm, then a threshold test: reads the
/// k = 1 approximant a and returns 0 when a < 1/2, else 1. Total on all Crn
/// values. On a Crn representing exactly 0 the result is 0; on exactly 1 the
/// result is 1; the tie at a == 1/2 rounds up.
Bit round_step(const Crn& x);

/// Two names for the same real number (both represent 1/2, approximants
/// approaching from below resp. above) on which round_step disagrees:
/// the rounding is not a function of the represented value.
struct RoundStepCounterexample {
  Crn low;    // approximant(k) = 1/2 - 2^-(k+1); at k = 1 that is 1/4
  Crn high;   // approximant(k) = 1/2 + 2^-(k+1); at k = 1 that is 3/4
  Bit low_bit;
  Bit high_bit;
};
RoundStepCounterexample round_step_counterexample();

}  // namespace unextend
