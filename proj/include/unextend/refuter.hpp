#pragma once

#include "unextend/crn.hpp"
#include "unextend/machine.hpp"
#include "unextend/unextendible.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unextend {

// A candidate broke its own claims: returned a value outside {0,1}, or a
// supposedly-CRN value whose approximants violate the precision contract.
struct CandidateInvalidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The diagonal run did not halt within the session's step cap. With unit
// host costs this cannot happen for a genuine total candidate; it signals
// a candidate whose declared cost assumptions were wrong, or a cap set too
// low on purpose.
struct BudgetExceededError : std::runtime_error {
  BudgetExceededError(const std::string& what_arg, Nat cap_arg, std::string partial_trace_arg)
      : std::runtime_error(what_arg),
        cap(std::move(cap_arg)),
        partial_trace(std::move(partial_trace_arg)) {}
  Nat cap;
  std::string partial_trace;
};

// Claimed total map from indices to bits, supplied as native code. The
// refuter never trusts the claim: outputs are checked at every probe.
using BitFn = std::function<Nat(const Nat&)>;
// Claimed total map from indices to constructive reals.
using CrnFn = std::function<Crn(const Nat&)>;

struct TotalBitsCandidate {
  std::string name;
  BitFn fn;
  Nat verification_budget;
  Nat host_id;  // assigned by the owning session at registration
};

struct CrnValuedCandidate {
  std::string name;
  CrnFn fn;
  Nat verification_budget;
  // Host id of the induced bit map, filled in on first induction so a
  // repeat refutation of the same candidate reuses the same host and
  // therefore lands on the identical witness.
  mutable std::optional<Nat> induced_id;
};

// Everything needed to refuse a candidate, in a form a third party can
// replay without the original host closure: the witness program listing is
// embedded, and re-running it against the session registry at f_budget
// steps must reproduce f_value.
struct WitnessReport {
  GoedelIndex witness;
  Bit f_value;
  Bit extender_value;
  Nat f_budget;
  std::string replay;  // program listing plus a one-line trace summary
};

// Stable text rendering (golden-test format).
std::string serialize(const WitnessReport& report);

struct AgreementRow {
  GoedelIndex index;
  bool agrees;
};

// Checks that every approximant pair of x probed at precision indices
// j < k <= max_k respects |approx(j) - approx(k)| < 2^-j + 2^-k. Throws
// CandidateInvalidError naming `input` and the offending pair otherwise.
void require_valid_modulus(const Crn& x, const Nat& input, unsigned max_k = 8);

// One refutation episode. The session owns the host registry the machine
// consults: candidates register their code as hosts while the session is
// open, the registry freezes at the first run, and every witness produced
// afterwards stays replayable against that frozen registry. Register all
// candidates before the first refute/agreement call.
class RefutationSession {
 public:
  explicit RefutationSession(Nat step_cap = Nat(10'000'000));

  // Registration phase. Throws std::logic_error after the registry froze.
  const TotalBitsCandidate& add_bit_extender(std::string name, BitFn fn,
                                             Nat verification_budget = Nat(1'000'000));
  const CrnValuedCandidate& add_crn_extender(std::string name, CrnFn fn,
                                             Nat verification_budget = Nat(1'000'000));

  // Registers (once) and returns the host computing the rounded bit of the
  // candidate's value, i.e. the total 0/1 map obtained by running the
  // rounding step on each returned real. Every call through the host
  // validates the real's modulus first.
  Nat induce_bit_extender(const CrnValuedCandidate& candidate);

  // Builds the program that flips the candidate's bit at its own input,
  // runs it on its own index, and reports the disagreement. The adaptive
  // budget starts at 10^3 steps and doubles up to the session cap.
  WitnessReport refute(const TotalBitsCandidate& candidate);
  WitnessReport refute(const CrnValuedCandidate& candidate);

  // Evaluates the candidate's bit at every enumerated index and compares
  // it with the tag. An extension candidate worth the name scores all-true
  // here, and refute defeats it anyway.
  std::vector<AgreementRow> check_agreement_on_domain(const TotalBitsCandidate& candidate,
                                                      const std::vector<EnumerationItem>& items);
  std::vector<AgreementRow> check_agreement_on_domain(const CrnValuedCandidate& candidate,
                                                      const std::vector<EnumerationItem>& items);

  const HostRegistry& registry() const { return registry_; }
  const Nat& step_cap() const { return step_cap_; }

 private:
  Nat step_cap_;
  HostRegistry registry_;
  std::deque<TotalBitsCandidate> bit_candidates_;
  std::deque<CrnValuedCandidate> crn_candidates_;

  void freeze_for_runs();
  WitnessReport refute_host(const Nat& host_id, const std::string& name,
                            const Nat& verification_budget);
  Bit candidate_bit_at(const TotalBitsCandidate& candidate, const Nat& n) const;
  Bit candidate_bit_at(const CrnValuedCandidate& candidate, const Nat& n) const;
};

// Replays a report against a registry: decodes the witness, runs it on its
// own index with exactly f_budget steps, and checks that the run halts,
// clamps to f_value, and that f_value is the flip of extender_value.
bool reverify(const WitnessReport& report, const HostRegistry& reg);

}  // namespace unextend
