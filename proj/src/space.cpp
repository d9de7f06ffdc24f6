#include "unextend/space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace unextend {

Rational discrete_distance(const Nat& x, const Nat& y) {
  return x == y ? Rational(0) : Rational(1);
}

StabilizationResult check_stabilizes(const SequencePrefix& seq, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  if (seq.claimed_stabilization >= seq.terms.size())
    throw std::invalid_argument("claimed stabilization position " +
                                std::to_string(seq.claimed_stabilization) +
                                " is outside the prefix of length " +
                                std::to_string(seq.terms.size()));
  const Nat& v = seq.terms[seq.claimed_stabilization];
  for (std::size_t i = seq.claimed_stabilization + 1; i < seq.terms.size(); ++i) {
    // Distances here are 0 or 1, so d < epsilon < 1 is just equality.
    if (discrete_distance(seq.terms[i], v) >= epsilon)
      return StabilizationResult{std::nullopt, i};
  }
  return StabilizationResult{v, seq.claimed_stabilization};
}

StabilizationResult check_stabilizes(const SequencePrefix& seq) {
  return check_stabilizes(seq, Rational(1, 2));
}

namespace {

void require_distinct(const FiniteSet& s, const char* which) {
  std::set<Nat> seen;
  for (const Nat& m : s.members)
    if (!seen.insert(m).second)
      throw std::invalid_argument(std::string(which) + " set repeats member " + m.str());
}

bool finite_contains(const FiniteSet& s, const Nat& x) {
  return std::find(s.members.begin(), s.members.end(), x) != s.members.end();
}

}  // namespace

ClosureCheck sequentially_closed_check(const SetSpec& set, const SequencePrefix& seq) {
  if (const auto* fin = std::get_if<FiniteSet>(&set)) {
    require_distinct(*fin, "finite");
    for (const Nat& t : seq.terms)
      if (!finite_contains(*fin, t))
        throw std::invalid_argument("sequence term " + t.str() + " is not a member of the set");
  } else if (const auto* pred = std::get_if<PredicateSet>(&set)) {
    if (!pred->contains) throw std::invalid_argument("membership predicate must be callable");
    for (const Nat& t : seq.terms)
      if (!pred->contains(t))
        throw std::invalid_argument("sequence term " + t.str() + " is not a member of the set");
  }

  StabilizationResult stab = check_stabilizes(seq);
  if (!stab.stabilized())
    return ClosureCheck{ClosureCheck::Outcome::NotStabilized, std::nullopt, std::nullopt};

  if (const auto* semi = std::get_if<SemiDecidableSet>(&set)) {
    SemiDecision d = membership_semidecide(GoedelIndex{*stab.limit}, semi->tag,
                                           semi->budget_schedule, *semi->registry);
    if (!d.confirmed())
      return ClosureCheck{ClosureCheck::Outcome::LimitMembershipUnconfirmed, stab.limit,
                          std::nullopt};
    return ClosureCheck{ClosureCheck::Outcome::LimitInSet, stab.limit, d.confirmed_budget};
  }

  // The limit is the term at the stabilization point, already checked above.
  return ClosureCheck{ClosureCheck::Outcome::LimitInSet, stab.limit, std::nullopt};
}

SeparationWitness normal_separation(const FiniteSet& left, const FiniteSet& right) {
  require_distinct(left, "left");
  require_distinct(right, "right");
  for (const Nat& m : left.members)
    if (finite_contains(right, m))
      throw std::invalid_argument("sets are not disjoint: both contain " + m.str());
  for (const Nat& m : left.members) {
    FiniteSet ball = open_ball(m, Rational(1, 2));
    if (ball.members != std::vector<Nat>{m})
      throw std::logic_error("ball certificate failed for " + m.str());
  }
  for (const Nat& m : right.members) {
    FiniteSet ball = open_ball(m, Rational(1, 2));
    if (ball.members != std::vector<Nat>{m})
      throw std::logic_error("ball certificate failed for " + m.str());
  }
  return SeparationWitness{left, right, Rational(1, 2)};
}

FiniteSet open_ball(const Nat& center, const Rational& radius) {
  if (radius <= 0 || radius > 1)
    throw std::invalid_argument("only radii in (0,1] have a finite ball here");
  // d(center, y) < radius <= 1 forces d = 0, i.e. y = center.
  return FiniteSet{{center}};
}

}  // namespace unextend
