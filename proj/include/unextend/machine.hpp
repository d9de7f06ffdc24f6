#pragma once

#include "unextend/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unextend {

inline constexpr unsigned kRegisterCount = 16;

// Unary-input register machine. Input arrives in register 0, output is read
// from register 0 at halt. All other registers start at zero.
//
//   INC r        r := r + 1
//   DEC r        r := r - 1, floored at 0
//   JZ r t       jump to t when r == 0, else fall through
//   JMP t        unconditional jump to t
//   EXEC rc ri   interpret the Goedel number held in rc on the value held in
//                ri; the callee's register 0 at halt is copied back into ri.
//                The callee's steps are charged to the caller's budget.
//   HOST id ri   apply the registered host primitive to ri, result into ri;
//                charged at the primitive's declared step cost.
//   HALT         stop; output is register 0.
//
// Jump targets may equal the instruction count: one past the end is the halt
// position, and plain fall-through off the end halts as well.
enum class Opcode : int {
  Inc = 0,
  Dec = 1,
  Jz = 2,
  Jmp = 3,
  Exec = 4,
  Host = 5,
  Halt = 6,
};

struct Instruction {
  Opcode op;
  Nat a;  // register, jump target, or host id depending on the opcode
  Nat b;  // second operand where the opcode takes one, otherwise 0
  bool operator==(const Instruction&) const = default;
};

// Terse constructors, so program literals in code read like listings.
namespace ins {
Instruction inc(Nat r);
Instruction dec(Nat r);
Instruction jz(Nat r, Nat target);
Instruction jmp(Nat target);
Instruction exec(Nat rcode, Nat rin);
Instruction host(Nat id, Nat rin);
Instruction halt();
}  // namespace ins

struct Program {
  std::vector<Instruction> instructions;
  bool operator==(const Program&) const = default;
};

// Well-formed means: at least one instruction, register operands below
// kRegisterCount, jump targets at most one past the end, and no stray
// operand payload on HALT / unused slots. Host ids may be any natural;
// whether an id is registered is a run-time question.
std::optional<std::string> well_formed_violation(const Program& p);
bool is_well_formed(const Program& p);

/// Text format: one instruction per line, mnemonic then decimal operands,
// e.g. "INC 0", "JZ 1 4", "EXEC 2 3", "HOST 0 1", "HALT".
std::string to_text(const Program& p);

struct ProgramParseError : std::runtime_error {
  ProgramParseError(std::size_t line_arg, const std::string& what_arg)
      : std::runtime_error("line " + std::to_string(line_arg) + ": " + what_arg),
        line(line_arg) {}
  std::size_t line;  // 1-based
};

// Inverse of to_text up to blank lines and surrounding whitespace. Purely
// syntactic; well-formedness is checked separately.
Program parse_program(std::string_view text);

struct GoedelIndex {
  Nat value;
  auto operator<=>(const GoedelIndex&) const = default;
};

// Injective numbering of well-formed programs. decode is total: numbers
// outside encode's range yield the canonical diverging program [JMP 0], so
// every natural names some program. decode(encode(p)) == p, and
// encode . decode is idempotent on all naturals.
GoedelIndex encode(const Program& p);  // throws std::invalid_argument unless well-formed
Program decode(const GoedelIndex& n);
std::optional<Program> decode_strict(const GoedelIndex& n);  // nullopt where the fallback applies
Program canonical_diverging_program();                       // [JMP 0]

// Pairing and sequence codec backing the numbering; exposed for tests.
Nat cantor_pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> cantor_unpair(const Nat& z);
Nat encode_sequence(const std::vector<Nat>& xs);
std::vector<Nat> decode_sequence(Nat n);

// Host primitives: total functions injected into the machine as oracle
// calls. Functions must be pure; exceptions they throw propagate out of
// run_bounded. Ids are assigned densely from 0 in registration order and
// stay stable for the registry's lifetime. A registry must be frozen before
// any run consults it and accepts no further entries afterwards.
using HostFn = std::function<Nat(const Nat&)>;

struct HostEntry {
  std::string name;
  HostFn fn;
  Nat step_cost;
};

class HostRegistry {
 public:
  Nat add(std::string name, HostFn fn, Nat step_cost = 1);
  void freeze();
  bool frozen() const { return frozen_; }
  const HostEntry* find(const Nat& id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<HostEntry> entries_;
  bool frozen_ = false;
};

// Shared empty registry, already frozen.
const HostRegistry& empty_registry();

enum class RunStatus { Halted, OutOfBudget, Fault };

struct RunResult {
  RunStatus status;
  Nat output;      // meaningful when Halted
  Nat steps_used;  // == budget when OutOfBudget; <= budget when Halted
  std::string fault_reason;

  bool halted() const { return status == RunStatus::Halted; }
};

struct RunOptions {
  // With the fallback on (default), EXEC on register contents outside the
  // numbering's range runs the canonical diverging program. With it off,
  // such an EXEC faults instead.
  bool exec_decode_fallback = true;
};

// Step-bounded deterministic evaluation; budget >= 1. Monotone in budget:
// a Halted result recurs, with identical output and steps_used, at every
// larger budget. The registry must be frozen. A non-well-formed program
// faults immediately.
RunResult run_bounded(const Program& p, const Nat& input, const Nat& budget,
                      const HostRegistry& reg = empty_registry(),
                      const RunOptions& opts = RunOptions{});

enum class Postprocess { identity, one_minus };

// A two- resp. six-instruction program computing E(n) or 1 - E(n) where E is
// the host primitive (assumed 0/1-valued for one_minus). Contains exactly one
// HOST instruction. Throws std::invalid_argument for an unregistered id.
Program compose_with_host(const Nat& host_id, Postprocess post, const HostRegistry& reg);

// The self-defeating index for a claimed total 0/1 extender E: the number e
// of the program computing n -> 1 - E(n). Running e on its own index halts
// with 1 - E(e), so the partial bit function at e disagrees with E.
GoedelIndex diagonal_index(const Nat& extender_host_id, const HostRegistry& reg);

}  // namespace unextend
