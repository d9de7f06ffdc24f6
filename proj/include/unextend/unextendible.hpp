#pragma once

#include "unextend/crn.hpp"
#include "unextend/machine.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unextend {

// Membership tags for the two value classes of the self-application bit
// function: A collects indices whose run halts with output clamping to 0,
// B those clamping to 1. The two sets are disjoint by determinism and
// jointly semi-decidable, never decidable.
enum class SetTag { A, B };

char tag_letter(SetTag tag);                       // 'A' or 'B'
std::optional<SetTag> tag_from_letter(char c);
Bit tag_bit(SetTag tag);                           // A -> 0, B -> 1
SetTag tag_of_bit(Bit b);

// Collapses an arbitrary machine output to a bit: 0 stays 0, everything
// else counts as 1.
Bit clamp_to_bit(const Nat& v);

// Outcome of probing the bit function at one budget. `bit` is engaged only
// when the self-application halted within the budget; `steps` then records
// the exact step count of that run. An unknown outcome says nothing about
// membership: the run may halt under a larger budget.
struct PartialBitResult {
  std::optional<Bit> bit;
  Nat steps = 0;
  bool defined() const { return bit.has_value(); }
};

// Runs program decode(n) on input n for at most `budget` steps and clamps
// the output. Once defined at some budget, the result is identical at every
// larger budget. A faulting run (for example an unregistered HOST id) is
// reported as not-yet-defined, the same as running out of budget.
PartialBitResult self_application_bit(const GoedelIndex& n, const Nat& budget,
                                      const HostRegistry& reg = empty_registry());

struct EnumerationItem {
  GoedelIndex index;
  SetTag set_tag;
  Nat certifying_budget;
  friend bool operator==(const EnumerationItem&, const EnumerationItem&) = default;
};

// Probes every index n <= max_index with budgets up to max_budget and
// returns each index that becomes defined, tagged A or B, with the least
// budget certifying it. Output is sorted by (certifying_budget, index) and
// contains each index at most once. Requires max_budget >= 1; max_index 0
// probes the single index 0.
std::vector<EnumerationItem> enumerate_members(const Nat& max_index, const Nat& max_budget,
                                               const HostRegistry& reg = empty_registry());

// Line format `<index> <A|B> <budget>`, one item per line.
std::string to_line(const EnumerationItem& item);
std::optional<EnumerationItem> parse_enumeration_line(std::string_view line);

// Result of a budgeted membership semi-decision. NotConfirmed (disengaged
// budget) is NOT evidence of non-membership; it only says no budget in the
// schedule sufficed.
struct SemiDecision {
  std::optional<Nat> confirmed_budget;
  bool confirmed() const { return confirmed_budget.has_value(); }
};

// Tries the budgets in `schedule` (which must be nonempty and strictly
// increasing) in order and confirms membership of n in the tagged set at
// the first budget whose probe is defined with the matching bit. A probe
// defined with the opposite bit settles the matter negatively for every
// later budget, so the scan stops early.
SemiDecision membership_semidecide(const GoedelIndex& n, SetTag tag,
                                   const std::vector<Nat>& schedule,
                                   const HostRegistry& reg = empty_registry());

}  // namespace unextend
