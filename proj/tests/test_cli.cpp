#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "unextend/cli.hpp"
#include "unextend/refuter.hpp"
#include "unextend/unextendible.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace unextend;
using nlohmann::json;

namespace {

// Path to the installed command-line binary, handed over by the test driver.
std::string g_cli_path;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<std::string> full{"unextend"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) argv.push_back(s.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the real process through the shell; stderr is dropped.
CliResult run_process(const std::string& args) {
  REQUIRE(!g_cli_path.empty());
  std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string collected;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) collected.append(buf, n);
  int status = pclose(pipe);
  REQUIRE(status != -1);
  return {WEXITSTATUS(status), collected, ""};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("approx prints a single fraction") {
  CliResult r = run({"approx", "--expr", "1/3 + 1/6", "--k", "8"});
  CHECK(r.code == 0);
  CHECK(r.out == "1/2\n");
  CHECK(r.err.empty());

  CHECK(run({"approx", "--expr", "0", "--k", "0"}).out == "0\n");

  CliResult js = run({"approx", "--expr", "2 * 1/4", "--k", "6", "--format", "json-lines"});
  CHECK(js.code == 0);
  json record = json::parse(js.out);
  CHECK(record["command"] == "approx");
  CHECK(record["k"] == 6);
  CHECK(record["approx"] == "1/2");
}

TEST_CASE("expression errors report the offending position and exit 1") {
  CliResult r = run({"approx", "--expr", "1 - 2", "--k", "3"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("position 2") != std::string::npos);
}

TEST_CASE("arith tabulates approximants and ends with the exact value") {
  CliResult r = run({"arith", "--expr", "1/3 + 1/6", "--max-k", "4"});
  CHECK(r.code == 0);
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines.back() == "exact 1/2");
  for (unsigned k = 0; k <= 4; ++k) {
    std::istringstream in(lines[k]);
    unsigned got_k = 99;
    std::string frac;
    in >> got_k >> frac;
    CHECK(got_k == k);
    auto q = parse_rational(frac);
    REQUIRE(q.has_value());
    Rational err_bound = *q - Rational(1, 2);
    if (err_bound < 0) err_bound = -err_bound;
    CHECK(err_bound < Rational(Nat(1), Nat(1) << k));
  }

  CliResult js = run({"arith", "--expr", "1/4 + 1/4", "--max-k", "2", "--format", "json-lines"});
  std::vector<std::string> jlines = split_lines(js.out);
  REQUIRE(jlines.size() == 4);
  for (const std::string& line : jlines) CHECK(json::parse(line)["command"] == "arith");
  CHECK(json::parse(jlines.back())["exact"] == "1/2");
}

TEST_CASE("enumerate matches the library rendering line for line") {
  CliResult r = run({"enumerate", "--max-index", "50", "--max-budget", "200"});
  CHECK(r.code == 0);
  std::string expected;
  for (const EnumerationItem& item : enumerate_members(50, 200)) expected += to_line(item) + "\n";
  CHECK(r.out == expected);

  // Every printed line re-verifies independently.
  for (const std::string& line : split_lines(r.out)) {
    auto item = parse_enumeration_line(line);
    REQUIRE(item.has_value());
    PartialBitResult probe = self_application_bit(item->index, item->certifying_budget);
    REQUIRE(probe.defined());
    CHECK(tag_of_bit(*probe.bit) == item->set_tag);
  }

  CHECK(run({"enumerate", "--max-index", "0", "--max-budget", "10"}).out.empty());
  CHECK(run({"enumerate", "--max-index", "50", "--max-budget", "200"}).out == r.out);

  CliResult js = run({"enumerate", "--max-index", "30", "--max-budget", "10", "--format",
                      "json-lines"});
  std::vector<std::string> jlines = split_lines(js.out);
  REQUIRE(!jlines.empty());
  for (const std::string& line : jlines) {
    json record = json::parse(line);
    std::string rebuilt = record["index"].get<std::string>() + " " +
                          record["set"].get<std::string>() + " " +
                          record["budget"].get<std::string>();
    CHECK(parse_enumeration_line(rebuilt).has_value());
  }
}

TEST_CASE("enumerate rejects junk arguments") {
  CHECK(run({"enumerate", "--max-index", "x", "--max-budget", "10"}).code == 1);
  CHECK(run({"enumerate", "--max-index", "5", "--max-budget", "0"}).code == 1);
  CHECK(run({"enumerate", "--max-index", "5"}).code == 1);  // missing required flag
}

TEST_CASE("refute reproduces the library's witness byte for byte") {
  CliResult r = run({"refute", "--candidate", "const0"});
  CHECK(r.code == 0);

  RefutationSession session;
  WitnessReport expected =
      session.refute(session.add_bit_extender("const0", [](const Nat&) { return Nat(0); }));
  CHECK(r.out == serialize(expected));
}

TEST_CASE("refute covers every built-in candidate shape") {
  CliResult js = run({"refute", "--candidate", "const0", "--format", "json-lines"});
  REQUIRE(js.code == 0);
  json record = json::parse(js.out);
  CHECK(record["command"] == "refute");
  CHECK(record["f_value"] == 1);
  CHECK(record["extender_value"] == 0);
  CHECK(record["f_budget"] == "4");
  CHECK(record["replay"].get<std::string>().find("HOST 0 0") != std::string::npos);

  record = json::parse(run({"refute", "--candidate", "const1", "--format", "json-lines"}).out);
  CHECK(record["f_value"] == 0);
  CHECK(record["extender_value"] == 1);

  record = json::parse(run({"refute", "--candidate", "parity", "--format", "json-lines"}).out);
  Nat witness(record["witness"].get<std::string>());
  CHECK(record["extender_value"] == (witness % 2 == 0 ? 0 : 1));
  CHECK(record["f_value"] != record["extender_value"]);

  record = json::parse(
      run({"refute", "--candidate", "threshold:37", "--format", "json-lines"}).out);
  CHECK(record["extender_value"] == 1);  // every witness index is astronomically large
  CHECK(record["f_value"] == 0);

  record = json::parse(run({"refute", "--candidate", "table:22=1,16=0,default=1", "--format",
                            "json-lines"})
                           .out);
  CHECK(record["extender_value"] == 1);
  CHECK(record["f_value"] == 0);

  record = json::parse(
      run({"refute", "--candidate", "crn-const:1/2", "--format", "json-lines"}).out);
  CHECK(record["extender_value"] == 1);  // the tie rounds up
  CHECK(record["f_value"] == 0);

  record = json::parse(run({"refute", "--candidate", "crn-const:0", "--format", "json-lines"}).out);
  CHECK(record["extender_value"] == 0);
  CHECK(record["f_value"] == 1);
}

TEST_CASE("a candidate outside {0,1} exits 2 and names the problem") {
  CliResult r = run({"refute", "--candidate", "nonbit"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("invalid candidate") != std::string::npos);
}

TEST_CASE("unknown candidates and malformed specs exit 1") {
  CHECK(run({"refute", "--candidate", "frobnicate"}).code == 1);
  CHECK(run({"refute", "--candidate", "threshold:x"}).code == 1);
  CHECK(run({"refute", "--candidate", "table:22"}).code == 1);
  CHECK(run({"refute", "--candidate", "crn-const:1/0"}).code == 1);
  CHECK(run({"refute"}).code == 1);
}

TEST_CASE("the step cap environment knob turns a refutation into exit 3") {
  setenv("UNEXTEND_STEP_CAP", "2", 1);
  CliResult r = run({"refute", "--candidate", "const0"});
  CHECK(r.code == 3);
  CHECK(r.err.find("budget cap exceeded") != std::string::npos);

  setenv("UNEXTEND_STEP_CAP", "abc", 1);
  CHECK(run({"refute", "--candidate", "const0"}).code == 1);

  unsetenv("UNEXTEND_STEP_CAP");
  CHECK(run({"refute", "--candidate", "const0"}).code == 0);
}

TEST_CASE("usage problems exit 1 and help exits 0") {
  CHECK(run({}).code == 1);                      // a subcommand is required
  CHECK(run({"frob"}).code == 1);                // unknown subcommand
  CHECK(run({"approx", "--expr", "1"}).code == 1);  // missing --k
  CHECK(run({"approx", "--expr", "1", "--k", "2", "--format", "xml"}).code == 1);

  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  for (const char* name : {"approx", "arith", "enumerate", "refute", "demo", "check-space"})
    CHECK(help.out.find(name) != std::string::npos);
}

TEST_CASE("check-space stabilization modes") {
  CliResult r = run({"check-space", "--terms", "1,2,2", "--from", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "stabilized at 1: limit 2\n");

  r = run({"check-space", "--terms", "1,2,1", "--from", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "violation at 2\n");

  CHECK(run({"check-space", "--terms", "1,2,2", "--from", "1", "--epsilon", "2/3"}).out ==
        "stabilized at 1: limit 2\n");
  CHECK(run({"check-space", "--terms", "1,2,2", "--from", "1", "--epsilon", "0"}).code == 1);
  CHECK(run({"check-space", "--terms", "1,2,2", "--from", "9"}).code == 1);
  CHECK(run({"check-space", "--terms", "", "--from", "0"}).code == 1);
  CHECK(run({"check-space", "--from", "0"}).code == 1);

  json record = json::parse(
      run({"check-space", "--terms", "1,2,2", "--from", "1", "--format", "json-lines"}).out);
  CHECK(record["mode"] == "stabilize");
  CHECK(record["stabilized"] == true);
  CHECK(record["position"] == 1);
  CHECK(record["limit"] == "2");
}

TEST_CASE("check-space closure mode") {
  CliResult r = run({"check-space", "--terms", "2,7,7", "--from", "1", "--set", "2,7"});
  CHECK(r.code == 0);
  CHECK(r.out == "limit 7 in set\n");

  r = run({"check-space", "--terms", "3,7,7", "--from", "1", "--set", "2,7"});
  CHECK(r.code == 1);
  CHECK(r.err.find("not a member") != std::string::npos);

  json record = json::parse(run({"check-space", "--terms", "2,7,7", "--from", "1", "--set", "2,7",
                                 "--format", "json-lines"})
                                .out);
  CHECK(record["mode"] == "closure");
  CHECK(record["outcome"] == "limit-in-set");
  CHECK(record["limit"] == "7");
}

TEST_CASE("check-space separation mode") {
  CliResult r = run({"check-space", "--left", "1,2", "--right", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "left: 1 2\nright: 3\nball radius: 1/2\n");

  CHECK(run({"check-space", "--left", "1,2"}).code == 1);
  CHECK(run({"check-space", "--left", "1,2", "--right", "2,9"}).code == 1);

  json record = json::parse(
      run({"check-space", "--left", "1,2", "--right", "3", "--format", "json-lines"}).out);
  CHECK(record["mode"] == "separation");
  CHECK(record["left"] == json::array({"1", "2"}));
  CHECK(record["right"] == json::array({"3"}));
  CHECK(record["ball_radius"] == "1/2");
}

TEST_CASE("demo narrates all five stages deterministically") {
  CliResult r = run({"demo"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const char* banners[] = {"== enumerate ==", "== candidate agreement ==", "== induce ==",
                           "== refute ==", "== rounding instability =="};
  std::size_t at = 0;
  for (const char* banner : banners) {
    std::size_t pos = r.out.find(banner, at);
    REQUIRE(pos != std::string::npos);
    at = pos;
  }
  CHECK(r.out.find("witness: ") != std::string::npos);
  CHECK(run({"demo"}).out == r.out);
}

TEST_CASE("demo in json-lines form is machine-readable") {
  CliResult r = run({"demo", "--format", "json-lines"});
  CHECK(r.code == 0);
  std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 5);

  json enumerate_stage = json::parse(lines[0]);
  CHECK(enumerate_stage["stage"] == "enumerate");
  CHECK(enumerate_stage["a_count"].get<std::size_t>() +
            enumerate_stage["b_count"].get<std::size_t>() ==
        enumerate_stage["count"].get<std::size_t>());
  for (const auto& line : enumerate_stage["items"])
    CHECK(parse_enumeration_line(line.get<std::string>()).has_value());

  json agreement = json::parse(lines[1]);
  CHECK(agreement["stage"] == "candidate-agreement");
  CHECK(agreement["all_agree"] == true);

  CHECK(json::parse(lines[2])["stage"] == "induce");

  json refutation = json::parse(lines[3]);
  CHECK(refutation["stage"] == "refute");
  CHECK(refutation["f_value"] != refutation["extender_value"]);

  json rounding = json::parse(lines[4]);
  CHECK(rounding["stage"] == "rounding-instability");
  CHECK(rounding["low_bit"] == 0);
  CHECK(rounding["high_bit"] == 1);
  CHECK(rounding["low_approx_at_1"] == "1/4");
  CHECK(rounding["high_approx_at_1"] == "3/4");
}

TEST_CASE("the installed binary behaves like the in-process entry point") {
  CliResult in_process = run({"enumerate", "--max-index", "40", "--max-budget", "100"});
  CliResult process = run_process("enumerate --max-index 40 --max-budget 100");
  CHECK(process.code == 0);
  CHECK(process.out == in_process.out);

  CliResult demo_a = run_process("demo");
  CliResult demo_b = run_process("demo");
  CHECK(demo_a.code == 0);
  CHECK(demo_a.out == demo_b.out);

  CHECK(run_process("refute --candidate frobnicate").code == 1);
  CHECK(run_process("refute --candidate nonbit").code == 2);
  CHECK(run_process("bogus-subcommand").code == 1);
  CHECK(run_process("--help").code == 0);
}

TEST_CASE("the installed binary honors the step cap variable") {
  REQUIRE(!g_cli_path.empty());
  std::string cmd = "UNEXTEND_STEP_CAP=2 " + g_cli_path + " refute --candidate const0";
  CliResult r{0, "", ""};
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[256];
  while (fread(buf, 1, sizeof buf, pipe) > 0) {
  }
  int status = pclose(pipe);
  REQUIRE(status != -1);
  r.code = WEXITSTATUS(status);
  CHECK(r.code == 3);
}

int main(int argc, char** argv) {
  std::vector<const char*> args{argv[0]};
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (g_cli_path.empty() && !a.empty() && a[0] != '-')
      g_cli_path = a;
    else
      args.push_back(argv[i]);
  }
  doctest::Context context(static_cast<int>(args.size()), args.data());
  return context.run();
}
