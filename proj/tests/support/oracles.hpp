// Independent oracles kept deliberately naive; production code must agree
// with these, never share logic with them.
#pragma once

#include "tacc/ir.hpp"

namespace tacc::oracles {

// Reachability by repeated full expansion until no new index appears.
inline std::set<size_t> brute_force_reachable(const Program& p) {
  std::set<size_t> seen{0};
  for (;;) {
    std::set<size_t> next = seen;
    for (size_t i : seen) {
      for (size_t s : successors(p, i)) {
        if (s < p.n()) next.insert(s);
      }
    }
    if (next == seen) return seen;
    seen = std::move(next);
  }
}

}  // namespace tacc::oracles
