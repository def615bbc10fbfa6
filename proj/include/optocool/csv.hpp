// Copyright 2026 The optocool authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "optocool/sweep.hpp"

namespace optocool::csv {

// Fixed 9-significant-digit scientific notation so that repeated runs are
// byte-identical and diffable.
inline std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

inline const char* to_string(sweep::CellStatus s) {
  switch (s) {
    case sweep::CellStatus::ok: return "ok";
    case sweep::CellStatus::unstable: return "unstable";
    case sweep::CellStatus::failed: return "failed";
  }
  return "?";
}

// Grid emitted axis2-fastest, matching the sweep's cell ordering. Cells
// without a steady state keep their axis values, stability margin and
// status, and leave the variance columns empty.
inline void write_sweep(std::ostream& os, const sweep::SweepTable& table) {
  os << sweep::to_string(table.spec.axis1.id) << ','
     << sweep::to_string(table.spec.axis2.id)
     << ",var_q,var_p,n_eff,t_eff_k,gamma_eff_res,net_cooling,g2,zeta,"
        "stable,margin,status\n";
  for (const auto& cell : table.cells) {
    os << format(cell.a1) << ',' << format(cell.a2) << ',';
    if (cell.status == sweep::CellStatus::ok) {
      os << format(cell.result.var_q) << ',' << format(cell.result.var_p)
         << ',' << format(cell.result.n_eff) << ','
         << format(cell.result.t_eff) << ',';
    } else {
      os << ",,,,";
    }
    os << format(cell.gamma_eff_res) << ',' << format(cell.net_cooling) << ','
       << format(cell.g2) << ',' << format(cell.zeta) << ','
       << (cell.status == sweep::CellStatus::unstable ? 0 : 1) << ','
       << format(cell.margin) << ',' << to_string(cell.status) << '\n';
  }
}

}  // namespace optocool::csv
