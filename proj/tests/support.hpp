#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgsol/specfun.hpp"

namespace kgsol::testing {

inline double relErr(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

struct OracleRow {
  BesselKind kind;
  double x;
  double value;
};

inline std::vector<OracleRow> loadOracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing oracle table " + path);
  std::vector<OracleRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    std::string name, x, v;
    std::getline(s, name, ',');
    std::getline(s, x, ',');
    std::getline(s, v, ',');
    BesselKind k = name == "J0"   ? BesselKind::J0
                   : name == "J1" ? BesselKind::J1
                   : name == "K0" ? BesselKind::K0
                                  : BesselKind::K1;
    rows.push_back({k, std::stod(x), std::stod(v)});
  }
  return rows;
}

/// Error measure used for the oracle: J scaled by max(1, |J|), K relative.
inline double oracleError(const OracleRow& r, double got) {
  const bool isJ = r.kind == BesselKind::J0 || r.kind == BesselKind::J1;
  const double scale = isJ ? std::max(1.0, std::abs(r.value)) : std::abs(r.value);
  return std::abs(got - r.value) / scale;
}

}  // namespace kgsol::testing
