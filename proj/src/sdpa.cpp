#include "mmb/sdpa.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mmb {

namespace {

void append_num(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.16g", v);
  out += buf;
}

}  // namespace

std::string to_sdpa_sparse(const CompiledSdp& cp) {
  std::string out;
  out += "*offset ";
  append_num(out, cp.obj_const);
  out += "\n*sense ";
  out += cp.maximize ? "max" : "min";
  out += "\n";

  std::vector<int> matrix_blocks;
  std::vector<int> diag_members;  // compiled indices of 1x1 blocks
  for (std::size_t b = 0; b < cp.blocks.size(); ++b) {
    if (cp.blocks[b].size == 1)
      diag_members.push_back(static_cast<int>(b));
    else
      matrix_blocks.push_back(static_cast<int>(b));
  }
  const int nblocks = static_cast<int>(matrix_blocks.size()) + (diag_members.empty() ? 0 : 1);

  out += std::to_string(cp.m) + "\n";
  out += std::to_string(nblocks) + "\n";
  for (std::size_t k = 0; k < matrix_blocks.size(); ++k) {
    if (k) out += " ";
    out += std::to_string(cp.blocks[matrix_blocks[k]].size);
  }
  if (!diag_members.empty()) {
    if (!matrix_blocks.empty()) out += " ";
    out += "-" + std::to_string(diag_members.size());
  }
  out += "\n";
  for (int i = 0; i < cp.m; ++i) {
    if (i) out += " ";
    append_num(out, cp.c[i]);
  }
  out += "\n";

  auto emit = [&](int var, int blk, int i, int j, double coef) {
    // SDPA: X = sum x_i F_i - F0, our constant part enters as F0 = -F0'.
    const double v = var == -1 ? -coef : coef;
    out += std::to_string(var + 1);
    out += " ";
    out += std::to_string(blk);
    out += " ";
    out += std::to_string(i + 1);
    out += " ";
    out += std::to_string(j + 1);
    out += " ";
    append_num(out, v);
    out += "\n";
  };

  for (std::size_t k = 0; k < matrix_blocks.size(); ++k) {
    const auto& cb = cp.blocks[matrix_blocks[k]];
    for (const auto& e : cb.entries) emit(e.var, static_cast<int>(k) + 1, e.i, e.j, e.coef);
  }
  if (!diag_members.empty()) {
    const int blk = static_cast<int>(matrix_blocks.size()) + 1;
    for (std::size_t t = 0; t < diag_members.size(); ++t) {
      const auto& cb = cp.blocks[diag_members[t]];
      for (const auto& e : cb.entries)
        emit(e.var, blk, static_cast<int>(t), static_cast<int>(t), e.coef);
    }
  }
  return out;
}

void export_sdpa(const CompiledSdp& cp, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write SDPA file: " + path);
  f << to_sdpa_sparse(cp);
  if (!f) throw std::runtime_error("failed writing SDPA file: " + path);
}

}  // namespace mmb
