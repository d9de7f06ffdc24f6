#include "unextend/machine.hpp"

#include <array>
#include <sstream>

namespace unextend {

namespace ins {
Instruction inc(Nat r) { return Instruction{Opcode::Inc, std::move(r), 0}; }
Instruction dec(Nat r) { return Instruction{Opcode::Dec, std::move(r), 0}; }
Instruction jz(Nat r, Nat target) { return Instruction{Opcode::Jz, std::move(r), std::move(target)}; }
Instruction jmp(Nat target) { return Instruction{Opcode::Jmp, std::move(target), 0}; }
Instruction exec(Nat rcode, Nat rin) { return Instruction{Opcode::Exec, std::move(rcode), std::move(rin)}; }
Instruction host(Nat id, Nat rin) { return Instruction{Opcode::Host, std::move(id), std::move(rin)}; }
Instruction halt() { return Instruction{Opcode::Halt, 0, 0}; }
}  // namespace ins

namespace {

bool valid_register(const Nat& r) { return r >= 0 && r < kRegisterCount; }

std::string at(std::size_t i, const std::string& what) {
  return "instruction " + std::to_string(i) + ": " + what;
}

}  // namespace

std::optional<std::string> well_formed_violation(const Program& p) {
  if (p.instructions.empty()) return "program is empty";
  const Nat halt_position = p.instructions.size();
  for (std::size_t i = 0; i < p.instructions.size(); ++i) {
    const Instruction& in = p.instructions[i];
    switch (in.op) {
      case Opcode::Inc:
      case Opcode::Dec:
        if (!valid_register(in.a)) return at(i, "register " + in.a.str() + " out of range");
        if (in.b != 0) return at(i, "unexpected second operand");
        break;
      case Opcode::Jz:
        if (!valid_register(in.a)) return at(i, "register " + in.a.str() + " out of range");
        if (in.b > halt_position)
          return at(i, "jump target " + in.b.str() + " beyond halt position " + halt_position.str());
        break;
      case Opcode::Jmp:
        if (in.a > halt_position)
          return at(i, "jump target " + in.a.str() + " beyond halt position " + halt_position.str());
        if (in.b != 0) return at(i, "unexpected second operand");
        break;
      case Opcode::Exec:
        if (!valid_register(in.a)) return at(i, "register " + in.a.str() + " out of range");
        if (!valid_register(in.b)) return at(i, "register " + in.b.str() + " out of range");
        break;
      case Opcode::Host:
        if (in.a < 0) return at(i, "negative host id");
        if (!valid_register(in.b)) return at(i, "register " + in.b.str() + " out of range");
        break;
      case Opcode::Halt:
        if (in.a != 0 || in.b != 0) return at(i, "HALT takes no operands");
        break;
      default:
        return at(i, "unknown opcode");
    }
  }
  return std::nullopt;
}

bool is_well_formed(const Program& p) { return !well_formed_violation(p).has_value(); }

std::string to_text(const Program& p) {
  std::string out;
  for (const Instruction& in : p.instructions) {
    switch (in.op) {
      case Opcode::Inc: out += "INC " + in.a.str(); break;
      case Opcode::Dec: out += "DEC " + in.a.str(); break;
      case Opcode::Jz: out += "JZ " + in.a.str() + " " + in.b.str(); break;
      case Opcode::Jmp: out += "JMP " + in.a.str(); break;
      case Opcode::Exec: out += "EXEC " + in.a.str() + " " + in.b.str(); break;
      case Opcode::Host: out += "HOST " + in.a.str() + " " + in.b.str(); break;
      case Opcode::Halt: out += "HALT"; break;
    }
    out += '\n';
  }
  return out;
}

Program parse_program(std::string_view text) {
  Program p;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    std::istringstream tokens{std::string(line)};
    std::string mnemonic;
    if (!(tokens >> mnemonic)) continue;  // blank line

    std::vector<Nat> operands;
    std::string word;
    while (tokens >> word) {
      auto n = parse_natural(word);
      if (!n) throw ProgramParseError(line_no, "bad operand '" + word + "'");
      operands.push_back(std::move(*n));
    }

    auto want = [&](std::size_t count) {
      if (operands.size() != count)
        throw ProgramParseError(line_no, mnemonic + " expects " + std::to_string(count) +
                                             " operand(s), got " + std::to_string(operands.size()));
    };
    if (mnemonic == "INC") { want(1); p.instructions.push_back(ins::inc(operands[0])); }
    else if (mnemonic == "DEC") { want(1); p.instructions.push_back(ins::dec(operands[0])); }
    else if (mnemonic == "JZ") { want(2); p.instructions.push_back(ins::jz(operands[0], operands[1])); }
    else if (mnemonic == "JMP") { want(1); p.instructions.push_back(ins::jmp(operands[0])); }
    else if (mnemonic == "EXEC") { want(2); p.instructions.push_back(ins::exec(operands[0], operands[1])); }
    else if (mnemonic == "HOST") { want(2); p.instructions.push_back(ins::host(operands[0], operands[1])); }
    else if (mnemonic == "HALT") { want(0); p.instructions.push_back(ins::halt()); }
    else throw ProgramParseError(line_no, "unknown mnemonic '" + mnemonic + "'");
  }
  return p;
}

Nat cantor_pair(const Nat& x, const Nat& y) {
  Nat s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<Nat, Nat> cantor_unpair(const Nat& z) {
  Nat disc = 8 * z + 1;
  Nat w = (sqrt(disc) - 1) / 2;
  Nat y = z - w * (w + 1) / 2;
  Nat x = w - y;
  return {std::move(x), std::move(y)};
}

Nat encode_sequence(const std::vector<Nat>& xs) {
  Nat acc = 0;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) acc = 1 + cantor_pair(*it, acc);
  return acc;
}

std::vector<Nat> decode_sequence(Nat n) {
  std::vector<Nat> xs;
  while (n > 0) {
    auto [x, rest] = cantor_unpair(n - 1);
    xs.push_back(std::move(x));
    n = std::move(rest);
  }
  return xs;
}

namespace {

// Instruction code: 7 * payload + opcode. The payload packs the operands,
// pairing them where the opcode takes two.
Nat instruction_payload(const Instruction& in) {
  switch (in.op) {
    case Opcode::Inc:
    case Opcode::Dec:
    case Opcode::Jmp:
      return in.a;
    case Opcode::Jz:
    case Opcode::Exec:
    case Opcode::Host:
      return cantor_pair(in.a, in.b);
    case Opcode::Halt:
      return 0;
  }
  throw std::logic_error("unreachable opcode");
}

Instruction instruction_from_code(const Nat& code) {
  auto op = static_cast<Opcode>((code % 7).convert_to<int>());
  Nat payload = code / 7;
  switch (op) {
    case Opcode::Inc:
    case Opcode::Dec:
    case Opcode::Jmp:
    case Opcode::Halt:
      // A nonzero HALT payload survives here and is rejected by validation.
      return Instruction{op, std::move(payload), 0};
    case Opcode::Jz:
    case Opcode::Exec:
    case Opcode::Host: {
      auto [a, b] = cantor_unpair(payload);
      return Instruction{op, std::move(a), std::move(b)};
    }
  }
  throw std::logic_error("unreachable opcode");
}

}  // namespace

GoedelIndex encode(const Program& p) {
  if (auto why = well_formed_violation(p))
    throw std::invalid_argument("cannot encode: " + *why);
  std::vector<Nat> codes;
  codes.reserve(p.instructions.size());
  for (const Instruction& in : p.instructions)
    codes.push_back(7 * instruction_payload(in) + static_cast<int>(in.op));
  return GoedelIndex{encode_sequence(codes)};
}

std::optional<Program> decode_strict(const GoedelIndex& n) {
  Program p;
  for (const Nat& code : decode_sequence(n.value))
    p.instructions.push_back(instruction_from_code(code));
  if (well_formed_violation(p)) return std::nullopt;
  return p;
}

Program canonical_diverging_program() { return Program{{ins::jmp(0)}}; }

Program decode(const GoedelIndex& n) {
  auto p = decode_strict(n);
  return p ? std::move(*p) : canonical_diverging_program();
}

Nat HostRegistry::add(std::string name, HostFn fn, Nat step_cost) {
  if (frozen_) throw std::logic_error("host registry is frozen");
  if (!fn) throw std::invalid_argument("host function must be callable");
  if (step_cost < 1) throw std::invalid_argument("host step cost must be at least 1");
  entries_.push_back(HostEntry{std::move(name), std::move(fn), std::move(step_cost)});
  return Nat(entries_.size() - 1);
}

void HostRegistry::freeze() { frozen_ = true; }

const HostEntry* HostRegistry::find(const Nat& id) const {
  if (id < 0 || id >= entries_.size()) return nullptr;
  return &entries_[id.convert_to<std::size_t>()];
}

const HostRegistry& empty_registry() {
  static const HostRegistry reg = [] {
    HostRegistry r;
    r.freeze();
    return r;
  }();
  return reg;
}

namespace {

struct Frame {
  Program prog;
  std::size_t pc = 0;
  std::array<Nat, kRegisterCount> regs{};
  unsigned ret_reg = 0;  // caller register receiving the output; unused in the bottom frame
};

unsigned reg_of(const Nat& n) { return n.convert_to<unsigned>(); }
std::size_t target_of(const Nat& n) { return n.convert_to<std::size_t>(); }

RunResult out_of_budget(const Nat& budget) {
  return RunResult{RunStatus::OutOfBudget, 0, budget, ""};
}

}  // namespace

RunResult run_bounded(const Program& p, const Nat& input, const Nat& budget,
                      const HostRegistry& reg, const RunOptions& opts) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (!reg.frozen()) throw std::logic_error("host registry must be frozen before any run");
  if (auto why = well_formed_violation(p))
    return RunResult{RunStatus::Fault, 0, 0, "program not well-formed: " + *why};

  Nat steps = 0;
  std::vector<Frame> stack;
  stack.emplace_back();
  stack.back().prog = p;
  stack.back().regs[0] = input;

  for (;;) {
    Frame& f = stack.back();
    if (f.pc >= f.prog.instructions.size()) {
      Nat out = f.regs[0];
      if (stack.size() == 1) return RunResult{RunStatus::Halted, std::move(out), steps, ""};
      unsigned r = f.ret_reg;
      stack.pop_back();
      stack.back().regs[r] = std::move(out);
      continue;
    }
    const Instruction& in = f.prog.instructions[f.pc];
    switch (in.op) {
      case Opcode::Inc:
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        f.regs[reg_of(in.a)] += 1;
        ++f.pc;
        break;
      case Opcode::Dec: {
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        Nat& r = f.regs[reg_of(in.a)];
        if (r > 0) r -= 1;  // floored at zero
        ++f.pc;
        break;
      }
      case Opcode::Jz:
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        f.pc = (f.regs[reg_of(in.a)] == 0) ? target_of(in.b) : f.pc + 1;
        break;
      case Opcode::Jmp:
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        f.pc = target_of(in.a);
        break;
      case Opcode::Exec: {
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        Nat code = f.regs[reg_of(in.a)];
        Nat arg = f.regs[reg_of(in.b)];
        unsigned ret = reg_of(in.b);
        Program callee;
        if (opts.exec_decode_fallback) {
          callee = decode(GoedelIndex{code});
        } else if (auto strict = decode_strict(GoedelIndex{code})) {
          callee = std::move(*strict);
        } else {
          return RunResult{RunStatus::Fault, 0, steps,
                           "EXEC target " + code.str() + " does not encode a program"};
        }
        ++f.pc;  // return lands after the EXEC
        Frame next;
        next.prog = std::move(callee);
        next.regs[0] = std::move(arg);
        next.ret_reg = ret;
        stack.push_back(std::move(next));
        break;
      }
      case Opcode::Host: {
        const HostEntry* entry = reg.find(in.a);
        if (!entry)
          return RunResult{RunStatus::Fault, 0, steps, "HOST id " + in.a.str() + " is not registered"};
        if (steps + entry->step_cost > budget) return out_of_budget(budget);
        steps += entry->step_cost;
        unsigned r = reg_of(in.b);
        f.regs[r] = entry->fn(f.regs[r]);
        ++f.pc;
        break;
      }
      case Opcode::Halt:
        if (steps + 1 > budget) return out_of_budget(budget);
        ++steps;
        f.pc = f.prog.instructions.size();
        break;
    }
  }
}

Program compose_with_host(const Nat& host_id, Postprocess post, const HostRegistry& reg) {
  if (!reg.find(host_id))
    throw std::invalid_argument("host id " + host_id.str() + " is not registered");
  using namespace ins;
  if (post == Postprocess::identity) {
    return Program{{host(host_id, 0), halt()}};
  }
  // r0 := E(n); 0 becomes 1, 1 becomes 0.
  return Program{{host(host_id, 0), jz(0, 4), dec(0), halt(), inc(0), halt()}};
}

GoedelIndex diagonal_index(const Nat& extender_host_id, const HostRegistry& reg) {
  return encode(compose_with_host(extender_host_id, Postprocess::one_minus, reg));
}

}  // namespace unextend
