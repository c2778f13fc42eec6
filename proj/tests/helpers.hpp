#pragma once

#include <vector>

#include "dampedmodes/floquet.hpp"
#include "dampedmodes/medium.hpp"
#include "oracles.hpp"

namespace testing_support {

inline std::vector<oracle::Segment> segments(const dampedmodes::DampedCell& cell) {
  std::vector<oracle::Segment> out;
  for (const auto& l : cell.layers) out.push_back({l.eps, l.width});
  return out;
}

/// First common real gap of the reference pair, from an independent dense scan of |f| - 2.
inline dampedmodes::Interval ref_first_gap() {
  using namespace dampedmodes;
  const auto ref = reference_medium(0.0).damped();
  auto g = [&](const DampedCell& c) {
    return [&c](double w) { return std::abs(discriminant(c, w, 1.0).real()) - 2.0; };
  };
  const auto ea = oracle::sign_changes(g(ref.cell_a), 0.5, 3.0, 25000);
  const auto eb = oracle::sign_changes(g(ref.cell_b), 0.5, 3.0, 25000);
  return {std::max(ea.at(0), eb.at(0)), std::min(ea.at(1), eb.at(1))};
}

}  // namespace testing_support
