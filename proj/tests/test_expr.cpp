#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unextend/expr.hpp"

#include <random>
#include <string>

using namespace unextend;

namespace {

Rational pow2_inv(unsigned k) { return Rational(Nat(1), Nat(1) << k); }

// |approx(k) - exact| < 2^-k must hold for every expression the parser accepts.
void check_tracks_exact(const std::string& text, unsigned max_k = 20) {
  Crn value = parse_crn_expression(text);
  Rational exact = parse_exact_expression(text);
  for (unsigned k = 0; k <= max_k; ++k) {
    Rational err = value.approx(k) - exact;
    if (err < 0) err = -err;
    CHECK(err < pow2_inv(k));
  }
}

std::size_t error_position(const std::string& text) {
  try {
    parse_exact_expression(text);
  } catch (const ExprParseError& e) {
    return e.position;
  }
  FAIL("expected ExprParseError for: ", text);
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("literals evaluate exactly") {
  CHECK(parse_exact_expression("0") == 0);
  CHECK(parse_exact_expression("42") == 42);
  CHECK(parse_exact_expression("1/3") == Rational(1, 3));
  CHECK(parse_exact_expression(" 2 / 7 ") == Rational(2, 7));
  CHECK(parse_crn_expression("0").approx(0) == 0);
}

TEST_CASE("sums and products respect precedence") {
  CHECK(parse_exact_expression("1 + 2 * 3") == 7);
  CHECK(parse_exact_expression("(1 + 2) * 3") == 9);
  CHECK(parse_exact_expression("2 * -3") == -6);
  CHECK(parse_exact_expression("-5") == -5);
  CHECK(parse_exact_expression("((7))") == 7);
  CHECK(parse_exact_expression("-(1/2 + 1/3)") == Rational(-5, 6));
  CHECK(parse_exact_expression("--4") == 4);
  CHECK(parse_exact_expression("1/3 + 1/6") == Rational(1, 2));
}

TEST_CASE("the interval build tracks the exact value at every precision") {
  check_tracks_exact("1/3 + 1/6", 8);
  check_tracks_exact("1 * 1", 4);
  check_tracks_exact("2/3 * 3/2 + -1");
  check_tracks_exact("(1/7 + 2/7) * (7/3)");
  check_tracks_exact("-(-(5/9)) * 81/5");
}

TEST_CASE("parse errors carry the 0-based offending position") {
  CHECK(error_position("") == 0);
  CHECK(error_position("a") == 0);
  CHECK(error_position("1 - 2") == 2);  // binary minus is not in the language
  CHECK(error_position("1/0") == 2);
  CHECK(error_position("(1") == 2);
  CHECK(error_position("1 2") == 2);
  CHECK(error_position("1 +") == 3);
  CHECK(error_position("()") == 1);
  CHECK(error_position("1/") == 2);

  try {
    parse_crn_expression("1 - 2");
    FAIL("expected ExprParseError");
  } catch (const ExprParseError& e) {
    CHECK(std::string(e.what()) == "position 2: unexpected '-'");
  }
}

TEST_CASE("deep nesting stays linear and correct") {
  std::string text = "1/3";
  for (int i = 0; i < 200; ++i) text = "(" + text + ")";
  CHECK(parse_exact_expression(text) == Rational(1, 3));
  CHECK(parse_crn_expression(text).approx(10) == Rational(1, 3));
}

TEST_CASE("randomized expressions agree with the exact evaluator") {
  std::mt19937_64 rng(0xE4B12);
  std::uniform_int_distribution<int> num_dist(0, 40);
  std::uniform_int_distribution<int> den_dist(1, 12);
  std::uniform_int_distribution<int> shape_dist(0, 4);

  // Small random expression trees rendered to text, then parsed both ways.
  std::function<std::string(int)> build = [&](int depth) -> std::string {
    int shape = depth <= 0 ? 0 : shape_dist(rng);
    switch (shape) {
      case 1: return "(" + build(depth - 1) + " + " + build(depth - 1) + ")";
      case 2: return "(" + build(depth - 1) + " * " + build(depth - 1) + ")";
      case 3: return "-" + build(depth - 1);
      case 4: return "(" + build(depth - 1) + ")";
      default: return std::to_string(num_dist(rng)) + "/" + std::to_string(den_dist(rng));
    }
  };

  for (int round = 0; round < 60; ++round) check_tracks_exact(build(4), 20);
}
