#pragma once

#include <string>

#include "mmb/compile.hpp"

namespace mmb {

// SDPA sparse format (.dat-s) of the compiled problem, in the convention
//   min c.x  s.t.  sum_i x_i F_i - F0 >= 0.
// Line 1: m, line 2: number of blocks, line 3: block sizes (negative =
// diagonal block), line 4: objective, then "k blk i j value" entries with
// 1-based indices, i <= j, k = 0 for F0. All scalar inequality blocks are
// grouped into one trailing diagonal block. The leading comment records the
// objective offset and sense dropped by the format.
std::string to_sdpa_sparse(const CompiledSdp& cp);

void export_sdpa(const CompiledSdp& cp, const std::string& path);

}  // namespace mmb
