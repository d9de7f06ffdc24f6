#include "unextend/cli.hpp"

#include "unextend/expr.hpp"
#include "unextend/space.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <map>
#include <ostream>

namespace unextend {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidCandidate = 2;
constexpr int kExitBudgetCap = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

std::optional<std::vector<Nat>> parse_csv_naturals(const std::string& text) {
  std::vector<Nat> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = text.find(',', start);
    std::string token = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t first = token.find_first_not_of(" \t");
    std::size_t last = token.find_last_not_of(" \t");
    if (first == std::string::npos) return std::nullopt;
    auto n = parse_natural(std::string_view(token).substr(first, last - first + 1));
    if (!n) return std::nullopt;
    out.push_back(std::move(*n));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Nat require_natural(const std::string& text, const char* flag) {
  auto n = parse_natural(text);
  if (!n) throw UsageError(std::string(flag) + " expects a natural number, got '" + text + "'");
  return std::move(*n);
}

Nat step_cap_from_env() {
  const char* raw = std::getenv("UNEXTEND_STEP_CAP");
  if (!raw) return Nat(10'000'000);
  auto cap = parse_natural(raw);
  if (!cap || *cap < 1)
    throw UsageError("UNEXTEND_STEP_CAP must be a positive natural, got '" + std::string(raw) + "'");
  return std::move(*cap);
}

bool json_format(const std::string& format) { return format == "json-lines"; }

// --- candidate corpus --------------------------------------------------

std::optional<CandidateSpec> parse_table_candidate(const std::string& spec) {
  CandidateSpec c;
  c.name = spec;
  std::map<Nat, Nat> table;
  Nat fallback = 0;
  bool fallback_seen = false;
  std::string body = spec.substr(std::string("table:").size());
  std::size_t start = 0;
  while (!body.empty()) {
    std::size_t comma = body.find(',', start);
    std::string entry =
        body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) return std::nullopt;
    std::string key = entry.substr(0, eq);
    auto value = parse_natural(entry.substr(eq + 1));
    if (!value) return std::nullopt;
    if (key == "default") {
      if (fallback_seen) return std::nullopt;
      fallback_seen = true;
      fallback = std::move(*value);
    } else {
      auto k = parse_natural(key);
      if (!k) return std::nullopt;
      if (!table.emplace(std::move(*k), std::move(*value)).second) return std::nullopt;
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
    if (start >= body.size()) return std::nullopt;  // trailing comma
  }
  c.bit_fn = [table = std::move(table), fallback = std::move(fallback)](const Nat& n) {
    auto it = table.find(n);
    return it == table.end() ? fallback : it->second;
  };
  return c;
}

}  // namespace

std::optional<CandidateSpec> parse_candidate_spec(const std::string& spec) {
  CandidateSpec c;
  c.name = spec;
  if (spec == "const0") {
    c.bit_fn = [](const Nat&) { return Nat(0); };
  } else if (spec == "const1") {
    c.bit_fn = [](const Nat&) { return Nat(1); };
  } else if (spec == "parity") {
    c.bit_fn = [](const Nat& n) { return Nat(n % 2); };
  } else if (spec == "nonbit") {
    c.bit_fn = [](const Nat&) { return Nat(2); };
  } else if (starts_with(spec, "threshold:")) {
    auto bound = parse_natural(std::string_view(spec).substr(std::string("threshold:").size()));
    if (!bound) return std::nullopt;
    c.bit_fn = [bound = std::move(*bound)](const Nat& n) { return Nat(n >= bound ? 1 : 0); };
  } else if (starts_with(spec, "table:")) {
    return parse_table_candidate(spec);
  } else if (starts_with(spec, "crn-const:")) {
    auto q = parse_rational(std::string_view(spec).substr(std::string("crn-const:").size()));
    if (!q) return std::nullopt;
    c.crn_fn = [q = std::move(*q)](const Nat&) { return Crn::from_rational(q); };
  } else {
    return std::nullopt;
  }
  return c;
}

namespace {

// --- commands ------------------------------------------------------------

int cmd_approx(const std::string& expr, unsigned k, const std::string& format,
               std::ostream& out) {
  Crn x = parse_crn_expression(expr);
  Rational a = x.approx(k);
  if (json_format(format)) {
    out << json{{"command", "approx"}, {"k", k}, {"approx", to_string(a)}}.dump() << '\n';
  } else {
    out << to_string(a) << '\n';
  }
  return kExitOk;
}

int cmd_arith(const std::string& expr, unsigned max_k, const std::string& format,
              std::ostream& out) {
  Crn x = parse_crn_expression(expr);
  Rational exact = parse_exact_expression(expr);
  for (unsigned k = 0; k <= max_k; ++k) {
    Rational a = x.approx(k);
    if (json_format(format)) {
      out << json{{"command", "arith"}, {"k", k}, {"approx", to_string(a)}}.dump() << '\n';
    } else {
      out << k << ' ' << to_string(a) << '\n';
    }
  }
  if (json_format(format)) {
    out << json{{"command", "arith"}, {"exact", to_string(exact)}}.dump() << '\n';
  } else {
    out << "exact " << to_string(exact) << '\n';
  }
  return kExitOk;
}

int cmd_enumerate(const std::string& max_index_text, const std::string& max_budget_text,
                  const std::string& format, std::ostream& out) {
  Nat max_index = require_natural(max_index_text, "--max-index");
  Nat max_budget = require_natural(max_budget_text, "--max-budget");
  if (max_budget < 1) throw UsageError("--max-budget must be at least 1");
  for (const EnumerationItem& item : enumerate_members(max_index, max_budget)) {
    if (json_format(format)) {
      out << json{{"command", "enumerate"},
                  {"index", item.index.value.str()},
                  {"set", std::string(1, tag_letter(item.set_tag))},
                  {"budget", item.certifying_budget.str()}}
                 .dump()
          << '\n';
    } else {
      out << to_line(item) << '\n';
    }
  }
  return kExitOk;
}

json witness_json(const WitnessReport& report) {
  return json{{"witness", report.witness.value.str()},
              {"f_value", to_int(report.f_value)},
              {"extender_value", to_int(report.extender_value)},
              {"f_budget", report.f_budget.str()},
              {"replay", report.replay}};
}

WitnessReport refute_spec(RefutationSession& session, const CandidateSpec& spec) {
  if (spec.bit_fn) return session.refute(session.add_bit_extender(spec.name, spec.bit_fn));
  return session.refute(session.add_crn_extender(spec.name, spec.crn_fn));
}

int cmd_refute(const std::string& candidate, const std::string& format, std::ostream& out) {
  auto spec = parse_candidate_spec(candidate);
  if (!spec) throw UsageError("unknown candidate '" + candidate + "'");
  RefutationSession session(step_cap_from_env());
  WitnessReport report = refute_spec(session, *spec);
  if (json_format(format)) {
    json record = witness_json(report);
    record["command"] = "refute";
    record["candidate"] = candidate;
    out << record.dump() << '\n';
  } else {
    out << serialize(report);
  }
  return kExitOk;
}

int cmd_demo(const std::string& format, std::ostream& out, std::ostream& err) {
  std::string stage = "enumerate";
  const bool js = json_format(format);
  try {
    // Sample the two value classes with the plain (host-free) machine.
    const Nat max_index = 200, max_budget = 500;
    std::vector<EnumerationItem> items = enumerate_members(max_index, max_budget);
    std::size_t a_count = 0;
    for (const EnumerationItem& item : items)
      if (item.set_tag == SetTag::A) ++a_count;
    if (js) {
      json lines = json::array();
      for (const EnumerationItem& item : items) lines.push_back(to_line(item));
      out << json{{"stage", "enumerate"},
                  {"max_index", max_index.str()},
                  {"max_budget", max_budget.str()},
                  {"count", items.size()},
                  {"a_count", a_count},
                  {"b_count", items.size() - a_count},
                  {"items", lines}}
                 .dump()
          << '\n';
    } else {
      out << "== enumerate ==\n";
      out << "indices <= " << max_index.str() << ", budgets <= " << max_budget.str() << ": "
          << items.size() << " members (" << a_count << " in A, " << (items.size() - a_count)
          << " in B)\n";
      for (std::size_t i = 0; i < items.size() && i < 8; ++i) out << to_line(items[i]) << '\n';
      if (items.size() > 8) out << "... " << (items.size() - 8) << " more\n";
    }

    // A real-valued candidate tailored to the sample: value 0 on every
    // enumerated A-index, 1 on every enumerated B-index, 0 elsewhere.
    stage = "candidate-agreement";
    std::map<Nat, SetTag> tags;
    for (const EnumerationItem& item : items) tags.emplace(item.index.value, item.set_tag);
    CrnFn candidate_fn = [tags](const Nat& n) {
      auto it = tags.find(n);
      int v = (it != tags.end() && it->second == SetTag::B) ? 1 : 0;
      return Crn::from_rational(Rational(v));
    };
    RefutationSession session(step_cap_from_env());
    const CrnValuedCandidate& candidate = session.add_crn_extender("sample-tags", candidate_fn);
    std::vector<AgreementRow> rows = session.check_agreement_on_domain(candidate, items);
    bool all_agree = true;
    for (const AgreementRow& row : rows) all_agree = all_agree && row.agrees;
    if (js) {
      out << json{{"stage", "candidate-agreement"},
                  {"candidate", candidate.name},
                  {"rows", rows.size()},
                  {"all_agree", all_agree}}
                 .dump()
          << '\n';
    } else {
      out << "== candidate agreement ==\n";
      out << "candidate 'sample-tags' (value 0 on sampled A, 1 on sampled B) agrees on "
          << rows.size() << "/" << rows.size() << " sampled members: "
          << (all_agree ? "yes" : "NO") << '\n';
    }
    if (!all_agree) throw std::runtime_error("tailored candidate failed to agree on its own sample");

    stage = "induce";
    Nat host_id = session.induce_bit_extender(candidate);
    if (js) {
      out << json{{"stage", "induce"}, {"host_id", host_id.str()}}.dump() << '\n';
    } else {
      out << "== induce ==\n";
      out << "rounding step applied to the candidate's values gives a total 0/1 map, host id "
          << host_id.str() << '\n';
    }

    stage = "refute";
    WitnessReport report = session.refute(candidate);
    if (js) {
      json record = witness_json(report);
      record["stage"] = "refute";
      out << record.dump() << '\n';
    } else {
      out << "== refute ==\n";
      out << "the flip program applied to its own index disagrees with the candidate there:\n";
      out << serialize(report);
      out << "agreement on the sampled sets did not rescue the extension.\n";
    }

    stage = "rounding-instability";
    RoundStepCounterexample cx = round_step_counterexample();
    if (js) {
      out << json{{"stage", "rounding-instability"},
                  {"value", "1/2"},
                  {"low_approx_at_1", to_string(cx.low.approx(1))},
                  {"high_approx_at_1", to_string(cx.high.approx(1))},
                  {"low_bit", to_int(cx.low_bit)},
                  {"high_bit", to_int(cx.high_bit)}}
                 .dump()
          << '\n';
    } else {
      out << "== rounding instability ==\n";
      out << "two names of the same real 1/2: approximants at index 1 are "
          << to_string(cx.low.approx(1)) << " and " << to_string(cx.high.approx(1))
          << ", rounding to " << to_int(cx.low_bit) << " and " << to_int(cx.high_bit)
          << "; the rounding step depends on the name, not the value.\n";
    }
  } catch (...) {
    err << "demo stage '" << stage << "' failed\n";
    throw;
  }
  return kExitOk;
}

void print_closure(const ClosureCheck& check, const std::string& format, std::ostream& out) {
  if (json_format(format)) {
    json record{{"command", "check-space"}, {"mode", "closure"}};
    switch (check.outcome) {
      case ClosureCheck::Outcome::LimitInSet: record["outcome"] = "limit-in-set"; break;
      case ClosureCheck::Outcome::LimitMembershipUnconfirmed:
        record["outcome"] = "limit-membership-unconfirmed";
        break;
      case ClosureCheck::Outcome::NotStabilized: record["outcome"] = "not-stabilized"; break;
    }
    if (check.limit) record["limit"] = check.limit->str();
    if (check.certificate_budget) record["certificate_budget"] = check.certificate_budget->str();
    out << record.dump() << '\n';
    return;
  }
  switch (check.outcome) {
    case ClosureCheck::Outcome::LimitInSet:
      out << "limit " << check.limit->str() << " in set";
      if (check.certificate_budget)
        out << " (certified at budget " << check.certificate_budget->str() << ")";
      out << '\n';
      break;
    case ClosureCheck::Outcome::LimitMembershipUnconfirmed:
      out << "limit " << check.limit->str() << " membership unconfirmed\n";
      break;
    case ClosureCheck::Outcome::NotStabilized:
      out << "not stabilized\n";
      break;
  }
}

int cmd_check_space(const std::string& terms_text, bool terms_given,
                    unsigned long long from_position, bool from_given,
                    const std::string& epsilon_text, const std::string& set_text, bool set_given,
                    const std::string& left_text, bool left_given, const std::string& right_text,
                    bool right_given, const std::string& format, std::ostream& out) {
  if (left_given || right_given) {
    if (!(left_given && right_given))
      throw UsageError("separation mode needs both --left and --right");
    auto left = parse_csv_naturals(left_text);
    auto right = parse_csv_naturals(right_text);
    if (!left) throw UsageError("--left expects a comma-separated list of naturals");
    if (!right) throw UsageError("--right expects a comma-separated list of naturals");
    SeparationWitness w = normal_separation(FiniteSet{*left}, FiniteSet{*right});
    if (json_format(format)) {
      json l = json::array(), r = json::array();
      for (const Nat& m : w.open_left.members) l.push_back(m.str());
      for (const Nat& m : w.open_right.members) r.push_back(m.str());
      out << json{{"command", "check-space"},
                  {"mode", "separation"},
                  {"left", l},
                  {"right", r},
                  {"ball_radius", to_string(w.ball_radius)}}
                 .dump()
          << '\n';
    } else {
      out << "left:";
      for (const Nat& m : w.open_left.members) out << ' ' << m.str();
      out << "\nright:";
      for (const Nat& m : w.open_right.members) out << ' ' << m.str();
      out << "\nball radius: " << to_string(w.ball_radius) << '\n';
    }
    return kExitOk;
  }

  if (!terms_given || !from_given)
    throw UsageError("stabilization mode needs --terms and --from (or use --left/--right)");
  auto terms = parse_csv_naturals(terms_text);
  if (!terms || terms->empty())
    throw UsageError("--terms expects a nonempty comma-separated list of naturals");
  auto epsilon = parse_rational(epsilon_text);
  if (!epsilon) throw UsageError("--epsilon expects a rational like 1/2");
  SequencePrefix prefix{*terms, static_cast<std::size_t>(from_position)};

  if (set_given) {
    auto members = parse_csv_naturals(set_text);
    if (!members) throw UsageError("--set expects a comma-separated list of naturals");
    print_closure(sequentially_closed_check(SetSpec{FiniteSet{*members}}, prefix), format, out);
    return kExitOk;
  }

  StabilizationResult r = check_stabilizes(prefix, *epsilon);
  if (json_format(format)) {
    json record{{"command", "check-space"}, {"mode", "stabilize"}, {"stabilized", r.stabilized()},
                {"position", r.position}};
    if (r.limit) record["limit"] = r.limit->str();
    out << record.dump() << '\n';
  } else if (r.stabilized()) {
    out << "stabilized at " << r.position << ": limit " << r.limit->str() << '\n';
  } else {
    out << "violation at " << r.position << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact constructive-real arithmetic, budgeted register-machine runs, and "
               "diagonal refutation of claimed total bit extensions"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json-lines"}))
        ->capture_default_str();
  };

  std::string expr;
  unsigned approx_k = 0;
  CLI::App* approx = app.add_subcommand("approx", "Evaluate an expression to one approximant");
  approx->add_option("--expr", expr, "Expression over rationals with +, unary -, *")->required();
  approx->add_option("--k", approx_k, "Precision index: result is within 2^-k of the value")
      ->required();
  add_format(approx);

  unsigned arith_max_k = 8;
  CLI::App* arith = app.add_subcommand("arith", "Tabulate approximants 0..max-k plus the exact value");
  arith->add_option("--expr", expr, "Expression over rationals with +, unary -, *")->required();
  arith->add_option("--max-k", arith_max_k, "Largest precision index to print")
      ->capture_default_str();
  add_format(arith);

  std::string max_index_text, max_budget_text;
  CLI::App* enumerate =
      app.add_subcommand("enumerate", "List indices whose self-application halts, tagged A or B");
  enumerate->add_option("--max-index", max_index_text, "Largest index to probe")->required();
  enumerate->add_option("--max-budget", max_budget_text, "Largest step budget to grant")
      ->required();
  add_format(enumerate);

  std::string candidate;
  CLI::App* refute = app.add_subcommand("refute", "Produce a verified disagreement witness");
  refute->add_option("--candidate", candidate,
                     "const0 | const1 | parity | threshold:N | table:K=V,..[,default=V] | "
                     "crn-const:q | nonbit")
      ->required();
  add_format(refute);

  CLI::App* demo = app.add_subcommand("demo", "End-to-end narrated run of the whole pipeline");
  add_format(demo);

  std::string terms_text, set_text, left_text, right_text;
  std::string epsilon_text = "1/2";
  unsigned long long from_position = 0;
  CLI::App* check_space = app.add_subcommand("check-space", "Discrete-space checks");
  CLI::Option* terms_opt =
      check_space->add_option("--terms", terms_text, "Sequence prefix, comma-separated");
  CLI::Option* from_opt = check_space->add_option(
      "--from", from_position, "Claimed stabilization position (0-based)");
  check_space->add_option("--epsilon", epsilon_text, "Stabilization tolerance in (0,1)")
      ->capture_default_str();
  CLI::Option* set_opt = check_space->add_option(
      "--set", set_text, "Finite set for a sequential-closure check, comma-separated");
  CLI::Option* left_opt =
      check_space->add_option("--left", left_text, "Left finite set for separation");
  CLI::Option* right_opt =
      check_space->add_option("--right", right_text, "Right finite set for separation");
  add_format(check_space);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (approx->parsed()) return cmd_approx(expr, approx_k, format, out);
    if (arith->parsed()) return cmd_arith(expr, arith_max_k, format, out);
    if (enumerate->parsed()) return cmd_enumerate(max_index_text, max_budget_text, format, out);
    if (refute->parsed()) return cmd_refute(candidate, format, out);
    if (demo->parsed()) return cmd_demo(format, out, err);
    if (check_space->parsed())
      return cmd_check_space(terms_text, terms_opt->count() > 0, from_position,
                             from_opt->count() > 0, epsilon_text, set_text, set_opt->count() > 0,
                             left_text, left_opt->count() > 0, right_text,
                             right_opt->count() > 0, format, out);
    err << "error: no command selected\n";
    return kExitUsage;
  } catch (const CandidateInvalidError& e) {
    err << "invalid candidate: " << e.what() << '\n';
    return kExitInvalidCandidate;
  } catch (const BudgetExceededError& e) {
    err << "budget cap exceeded: " << e.what() << '\n';
    return kExitBudgetCap;
  } catch (const ExprParseError& e) {
    err << "parse error at " << e.what() << '\n';
    return kExitUsage;
  } catch (const ProgramParseError& e) {
    err << "parse error at " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace unextend
