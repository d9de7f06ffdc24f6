#include "unextend/unextendible.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace unextend {

char tag_letter(SetTag tag) { return tag == SetTag::A ? 'A' : 'B'; }

std::optional<SetTag> tag_from_letter(char c) {
  if (c == 'A') return SetTag::A;
  if (c == 'B') return SetTag::B;
  return std::nullopt;
}

Bit tag_bit(SetTag tag) { return tag == SetTag::A ? Bit::zero : Bit::one; }

SetTag tag_of_bit(Bit b) { return b == Bit::zero ? SetTag::A : SetTag::B; }

Bit clamp_to_bit(const Nat& v) { return v == 0 ? Bit::zero : Bit::one; }

PartialBitResult self_application_bit(const GoedelIndex& n, const Nat& budget,
                                      const HostRegistry& reg) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  RunResult r = run_bounded(decode(n), n.value, budget, reg);
  if (r.status != RunStatus::Halted) return PartialBitResult{};
  return PartialBitResult{clamp_to_bit(r.output), r.steps_used};
}

std::vector<EnumerationItem> enumerate_members(const Nat& max_index, const Nat& max_budget,
                                               const HostRegistry& reg) {
  if (max_budget < 1) throw std::invalid_argument("max budget must be at least 1");
  std::vector<EnumerationItem> items;
  for (Nat n = 0; n <= max_index; ++n) {
    // A halting run's step count does not depend on the budget, and the run
    // halts at a budget exactly when that budget covers the step count. So
    // one probe at the ceiling finds the least certifying budget directly.
    PartialBitResult r = self_application_bit(GoedelIndex{n}, max_budget, reg);
    if (!r.defined()) continue;
    items.push_back(EnumerationItem{GoedelIndex{n}, tag_of_bit(*r.bit), r.steps});
  }
  std::sort(items.begin(), items.end(), [](const EnumerationItem& a, const EnumerationItem& b) {
    if (a.certifying_budget != b.certifying_budget)
      return a.certifying_budget < b.certifying_budget;
    return a.index.value < b.index.value;
  });
  return items;
}

std::string to_line(const EnumerationItem& item) {
  return item.index.value.str() + ' ' + tag_letter(item.set_tag) + ' ' +
         item.certifying_budget.str();
}

std::optional<EnumerationItem> parse_enumeration_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string index_word, tag_word, budget_word, extra;
  if (!(in >> index_word >> tag_word >> budget_word) || (in >> extra)) return std::nullopt;
  auto index = parse_natural(index_word);
  auto budget = parse_natural(budget_word);
  if (!index || !budget || tag_word.size() != 1) return std::nullopt;
  auto tag = tag_from_letter(tag_word[0]);
  if (!tag) return std::nullopt;
  return EnumerationItem{GoedelIndex{std::move(*index)}, *tag, std::move(*budget)};
}

SemiDecision membership_semidecide(const GoedelIndex& n, SetTag tag,
                                   const std::vector<Nat>& schedule,
                                   const HostRegistry& reg) {
  if (schedule.empty()) throw std::invalid_argument("budget schedule must be nonempty");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("budget schedule must be strictly increasing");
  for (const Nat& budget : schedule) {
    PartialBitResult r = self_application_bit(n, budget, reg);
    if (!r.defined()) continue;
    if (*r.bit == tag_bit(tag)) return SemiDecision{budget};
    break;  // defined with the opposite bit; larger budgets agree
  }
  return SemiDecision{};
}

}  // namespace unextend
