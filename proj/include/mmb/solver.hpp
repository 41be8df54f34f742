#pragma once

#include "mmb/compile.hpp"
#include "mmb/sdp.hpp"

namespace mmb {

// Primal-dual interior-point method (Nesterov-Todd scaling, Mehrotra
// predictor-corrector) for the compiled LMI form. Never throws on numerical
// trouble: the status field reports it.
Solution solve_compiled(const CompiledSdp& cp, const SolverSettings& settings = {});

// compile + solve + map values and matrices back to the problem's layout.
Solution solve(const SdpProblem& p, const SolverSettings& settings = {});

}  // namespace mmb
