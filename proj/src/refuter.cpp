#include "unextend/refuter.hpp"

#include <utility>

namespace unextend {

void require_valid_modulus(const Crn& x, const Nat& input, unsigned max_k) {
  for (unsigned j = 0; j < max_k; ++j) {
    for (unsigned k = j + 1; k <= max_k; ++k) {
      Rational gap = x.approx(j) - x.approx(k);
      if (gap < 0) gap = -gap;
      if (gap < pow2_inv(j) + pow2_inv(k)) continue;
      throw CandidateInvalidError("candidate value at input " + input.str() +
                                  " violates the precision contract between indices " +
                                  std::to_string(j) + " and " + std::to_string(k) +
                                  " (gap " + to_string(gap) + ")");
    }
  }
}

std::string serialize(const WitnessReport& report) {
  std::string out;
  out += "witness: " + report.witness.value.str() + '\n';
  out += "f_value: " + std::to_string(to_int(report.f_value)) + '\n';
  out += "extender_value: " + std::to_string(to_int(report.extender_value)) + '\n';
  out += "f_budget: " + report.f_budget.str() + '\n';
  out += report.replay;
  return out;
}

RefutationSession::RefutationSession(Nat step_cap) : step_cap_(std::move(step_cap)) {
  if (step_cap_ < 1) throw std::invalid_argument("step cap must be at least 1");
}

const TotalBitsCandidate& RefutationSession::add_bit_extender(std::string name, BitFn fn,
                                                              Nat verification_budget) {
  if (registry_.frozen())
    throw std::logic_error("registration closed: the session already started running");
  Nat id = registry_.add(name, fn);
  bit_candidates_.push_back(TotalBitsCandidate{std::move(name), std::move(fn),
                                               std::move(verification_budget), std::move(id)});
  return bit_candidates_.back();
}

const CrnValuedCandidate& RefutationSession::add_crn_extender(std::string name, CrnFn fn,
                                                              Nat verification_budget) {
  if (registry_.frozen())
    throw std::logic_error("registration closed: the session already started running");
  crn_candidates_.push_back(CrnValuedCandidate{std::move(name), std::move(fn),
                                               std::move(verification_budget), std::nullopt});
  // Induce eagerly: host ids must all exist before the registry freezes at
  // the first run, and eager induction keeps ids a function of registration
  // order alone.
  induce_bit_extender(crn_candidates_.back());
  return crn_candidates_.back();
}

Nat RefutationSession::induce_bit_extender(const CrnValuedCandidate& candidate) {
  if (candidate.induced_id) return *candidate.induced_id;
  if (registry_.frozen())
    throw std::logic_error("cannot induce a bit map after the session started running; "
                           "register candidates first");
  CrnFn fn = candidate.fn;
  Nat id = registry_.add("rounded:" + candidate.name, [fn](const Nat& n) {
    Crn x = fn(n);
    require_valid_modulus(x, n);
    return Nat(to_int(round_step(x)));
  });
  candidate.induced_id = id;
  return id;
}

void RefutationSession::freeze_for_runs() {
  if (!registry_.frozen()) registry_.freeze();
}

WitnessReport RefutationSession::refute_host(const Nat& host_id, const std::string& name,
                                             const Nat& verification_budget) {
  freeze_for_runs();
  GoedelIndex e = diagonal_index(host_id, registry_);
  Program p = decode(e);

  Nat budget = step_cap_ < 1000 ? step_cap_ : Nat(1000);
  RunResult r;
  for (;;) {
    r = run_bounded(p, e.value, budget, registry_);
    if (r.status == RunStatus::Halted) break;
    if (r.status == RunStatus::Fault)
      throw CandidateInvalidError("diagonal run against '" + name + "' faulted: " + r.fault_reason);
    if (budget >= step_cap_)
      throw BudgetExceededError(
          "diagonal run against '" + name + "' exceeded the step cap " + step_cap_.str(),
          step_cap_, "program:\n" + to_text(p) + "trace: out of budget steps=" + r.steps_used.str() + '\n');
    budget *= 2;
    if (budget > step_cap_) budget = step_cap_;
  }

  Bit f_value = clamp_to_bit(r.output);

  const HostEntry* entry = registry_.find(host_id);
  Nat direct = entry->fn(e.value);
  if (direct != 0 && direct != 1)
    throw CandidateInvalidError("candidate '" + name + "' returned non-bit value " +
                                direct.str() + " at its own diagonal index");
  Bit extender_value = direct == 0 ? Bit::zero : Bit::one;
  if (f_value == extender_value)
    throw CandidateInvalidError("candidate '" + name +
                                "' gave different answers across repeat calls at the witness");
  if (r.steps_used > verification_budget)
    throw BudgetExceededError(
        "halting diagonal run used " + r.steps_used.str() +
            " steps, above the candidate's verification budget " + verification_budget.str(),
        verification_budget, "program:\n" + to_text(p));

  std::string replay = "program:\n" + to_text(p) + "trace: halted output=" + r.output.str() +
                       " steps=" + r.steps_used.str() + '\n';
  return WitnessReport{e, f_value, extender_value, r.steps_used, std::move(replay)};
}

WitnessReport RefutationSession::refute(const TotalBitsCandidate& candidate) {
  return refute_host(candidate.host_id, candidate.name, candidate.verification_budget);
}

WitnessReport RefutationSession::refute(const CrnValuedCandidate& candidate) {
  Nat id = induce_bit_extender(candidate);
  return refute_host(id, candidate.name, candidate.verification_budget);
}

Bit RefutationSession::candidate_bit_at(const TotalBitsCandidate& candidate, const Nat& n) const {
  Nat v = candidate.fn(n);
  if (v != 0 && v != 1)
    throw CandidateInvalidError("candidate '" + candidate.name + "' returned non-bit value " +
                                v.str() + " at input " + n.str());
  return v == 0 ? Bit::zero : Bit::one;
}

Bit RefutationSession::candidate_bit_at(const CrnValuedCandidate& candidate, const Nat& n) const {
  Crn x = candidate.fn(n);
  require_valid_modulus(x, n);
  return round_step(x);
}

namespace {

template <typename Candidate, typename BitAt>
std::vector<AgreementRow> agreement_rows(const Candidate& candidate,
                                         const std::vector<EnumerationItem>& items,
                                         BitAt&& bit_at) {
  std::vector<AgreementRow> rows;
  rows.reserve(items.size());
  for (const EnumerationItem& item : items) {
    Bit b = bit_at(candidate, item.index.value);
    rows.push_back(AgreementRow{item.index, b == tag_bit(item.set_tag)});
  }
  return rows;
}

}  // namespace

std::vector<AgreementRow> RefutationSession::check_agreement_on_domain(
    const TotalBitsCandidate& candidate, const std::vector<EnumerationItem>& items) {
  return agreement_rows(candidate, items, [this](const TotalBitsCandidate& c, const Nat& n) {
    return candidate_bit_at(c, n);
  });
}

std::vector<AgreementRow> RefutationSession::check_agreement_on_domain(
    const CrnValuedCandidate& candidate, const std::vector<EnumerationItem>& items) {
  return agreement_rows(candidate, items, [this](const CrnValuedCandidate& c, const Nat& n) {
    return candidate_bit_at(c, n);
  });
}

bool reverify(const WitnessReport& report, const HostRegistry& reg) {
  if (report.f_value != flipped(report.extender_value)) return false;
  RunResult r = run_bounded(decode(report.witness), report.witness.value, report.f_budget, reg);
  return r.status == RunStatus::Halted && clamp_to_bit(r.output) == report.f_value &&
         r.steps_used == report.f_budget;
}

}  // namespace unextend
