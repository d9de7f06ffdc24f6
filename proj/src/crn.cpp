#include "unextend/crn.hpp"

#include <stdexcept>
#include <utility>

namespace unextend {

struct Crn::State {
  Approximant fn;
  std::string label;
  mutable std::mutex mu;
  mutable std::map<unsigned, Rational> memo;
};

Crn::Crn(std::shared_ptr<State> state) : state_(std::move(state)) {}

Crn Crn::from_rational(Rational q, std::string label) {
  auto state = std::make_shared<State>();
  state->fn = [q](unsigned) { return q; };
  state->label = label.empty() ? to_string(q) : std::move(label);
  return Crn(std::move(state));
}

Crn Crn::from_approximant(Approximant fn, std::string label) {
  if (!fn) throw std::invalid_argument("Crn approximant must be callable");
  auto state = std::make_shared<State>();
  state->fn = std::move(fn);
  state->label = std::move(label);
  return Crn(std::move(state));
}

Rational Crn::approx(unsigned k) const {
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto it = state_->memo.find(k);
    if (it != state_->memo.end()) return it->second;
  }
  // Computed outside the lock; the approximant is deterministic, so a
  // concurrent duplicate computation inserts the identical value.
  Rational value = state_->fn(k);
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->memo.emplace(k, std::move(value)).first->second;
}

const std::string& Crn::label() const { return state_->label; }

namespace {

unsigned shifted(unsigned k, unsigned s) {
  unsigned r = k + s;
  if (r < k) throw std::overflow_error("precision index overflow");
  return r;
}

// Integer ceiling of a nonnegative rational.
Nat ceil_nonneg(const Rational& q) {
  return (numerator(q) + denominator(q) - 1) / denominator(q);
}

}  // namespace

Crn operator+(const Crn& a, const Crn& b) {
  return Crn::from_approximant(
      [a, b](unsigned k) { return a.approx(shifted(k, 1)) + b.approx(shifted(k, 1)); },
      "sum");
}

Crn operator-(const Crn& a) {
  return Crn::from_approximant([a](unsigned k) { return -a.approx(k); }, "neg");
}

Crn operator*(const Crn& a, const Crn& b) {
  // |x| < |approximant(0)| + 1 by the modulus at k = 0, so B bounds both
  // factors; shifting both queries by s with 2^s >= 2B + 1 keeps
  // |ab - a'b'| <= |a||b - b'| + |b'||a - a'| below 2^-k.
  Rational a0 = abs(a.approx(0));
  Rational b0 = abs(b.approx(0));
  Nat bound = ceil_nonneg((a0 < b0 ? b0 : a0) + 1);
  unsigned s = ceil_log2(2 * bound + 1);
  return Crn::from_approximant(
      [a, b, s](unsigned k) { return a.approx(shifted(k, s)) * b.approx(shifted(k, s)); },
      "product");
}

Bit round_step(const Crn& x) {
  Rational a = x.approx(1);
  return a < Rational(1, 2) ? Bit::zero : Bit::one;
}

RoundStepCounterexample round_step_counterexample() {
  Crn low = Crn::from_approximant(
      [](unsigned k) { return Rational(1, 2) - pow2_inv(shifted(k, 1)); }, "1/2 from below");
  Crn high = Crn::from_approximant(
      [](unsigned k) { return Rational(1, 2) + pow2_inv(shifted(k, 1)); }, "1/2 from above");
  return RoundStepCounterexample{low, high, round_step(low), round_step(high)};
}

}  // namespace unextend
