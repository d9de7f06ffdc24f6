#pragma once

#include "unextend/machine.hpp"
#include "unextend/rational.hpp"
#include "unextend/unextendible.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace unextend {

// A convergent sequence of naturals under the discrete metric, rendered
// computably: a finite prefix together with the position from which the
// caller claims the terms stay constant. Checks on it are total because
// everything in sight is finite.
struct SequencePrefix {
  std::vector<Nat> terms;
  std::size_t claimed_stabilization = 0;  // must be < terms.size()
};

// 0 when x = y, 1 otherwise.
Rational discrete_distance(const Nat& x, const Nat& y);

// Outcome of testing a claimed stabilization point. `limit` is engaged iff
// every term from the claimed position onward equals the term there;
// `position` is the claimed point on success and the first offending index
// on failure.
struct StabilizationResult {
  std::optional<Nat> limit;
  std::size_t position = 0;
  bool stabilized() const { return limit.has_value(); }
};

// Any epsilon in (0,1) gives the same verdict here, since nonzero distances
// are exactly 1; the parameter exists so callers can state the tolerance
// they reason with. Throws std::invalid_argument outside (0,1) or when the
// claimed position is out of range.
StabilizationResult check_stabilizes(const SequencePrefix& seq, const Rational& epsilon);
StabilizationResult check_stabilizes(const SequencePrefix& seq);  // epsilon = 1/2

// The three ways this artifact can know a subset of the naturals.
struct FiniteSet {
  std::vector<Nat> members;  // pairwise distinct
};
struct PredicateSet {
  std::function<bool(const Nat&)> contains;  // total
};
struct SemiDecidableSet {
  SetTag tag;
  std::vector<Nat> budget_schedule;  // nonempty, strictly increasing
  const HostRegistry* registry = &empty_registry();
};
using SetSpec = std::variant<FiniteSet, PredicateSet, SemiDecidableSet>;

struct ClosureCheck {
  enum class Outcome { LimitInSet, LimitMembershipUnconfirmed, NotStabilized };
  Outcome outcome;
  std::optional<Nat> limit;               // engaged unless NotStabilized
  std::optional<Nat> certificate_budget;  // engaged for confirmed semi-decidable membership
};

// Verifies the sequential-closure property on a concrete instance: a
// stabilized sequence's limit is one of its own terms, hence in the set.
// For FiniteSet/PredicateSet inputs every term is first checked for
// membership and a non-member raises std::invalid_argument naming it. For
// SemiDecidableSet inputs term membership stays the caller's claim (it is
// only semi-decidable); the limit itself is semi-decided on the set's
// schedule and an unconfirmed limit yields LimitMembershipUnconfirmed
// rather than an error.
ClosureCheck sequentially_closed_check(const SetSpec& set, const SequencePrefix& seq);

// Disjoint finite sets separated by themselves: in this metric each set is
// its own open neighbourhood, certified by the radius-1/2 ball around each
// member collapsing to that member's singleton.
struct SeparationWitness {
  FiniteSet open_left;
  FiniteSet open_right;
  Rational ball_radius;  // 1/2
};

// Throws std::invalid_argument naming a common element when the inputs
// intersect, or when either input repeats a member.
SeparationWitness normal_separation(const FiniteSet& left, const FiniteSet& right);

// Open ball {y : d(center,y) < radius} for radius in (0,1], which is the
// singleton {center}. Larger radii cover every natural and are rejected
// with std::invalid_argument (no finite rendering exists).
FiniteSet open_ball(const Nat& center, const Rational& radius);

}  // namespace unextend
