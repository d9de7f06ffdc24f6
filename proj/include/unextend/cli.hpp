#pragma once

#include "unextend/refuter.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace unextend {

// A parsed --candidate value. Exactly one of bit_fn / crn_fn is callable.
// Built-ins: const0, const1, parity, threshold:N, table:K=V,...[,default=V],
// crn-const:q, and the deliberately broken nonbit (always returns 2) for
// exercising the invalid-candidate exit path.
struct CandidateSpec {
  std::string name;
  BitFn bit_fn;
  CrnFn crn_fn;
};

std::optional<CandidateSpec> parse_candidate_spec(const std::string& spec);

// Full command dispatch. Exit codes: 0 success, 1 usage or parse problem,
// 2 invalid candidate, 3 step-cap exceeded. UNEXTEND_STEP_CAP overrides the
// refutation step cap (default 10^7).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace unextend
