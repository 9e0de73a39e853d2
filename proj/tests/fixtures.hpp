#pragma once

#include <vector>

#include "persuasion/model.hpp"

namespace fixtures {

// Two agents, F = (1, 1, 0.6), r = (0, 0.5, 0.6).
inline persuasion::Instance two_agent(double prior1 = 0.8) {
  return persuasion::Instance(2, prior1, persuasion::SharingTable{{1.0, 1.0, 0.6}},
                              persuasion::CostTable{{0.0, 0.5, 0.6}});
}

// Single agent, F(1) = 1, r(1) = 0.3.
inline persuasion::Instance single_agent(double prior1 = 0.5) {
  return persuasion::Instance(1, prior1, persuasion::SharingTable{{1.0, 1.0}}, persuasion::CostTable{{0.0, 0.3}});
}

// Three agents with a tabulated F.
inline persuasion::Instance three_agent(double prior1) {
  return persuasion::Instance(3, prior1, persuasion::SharingTable{{1.0, 1.0, 0.7, 0.55}},
                              persuasion::CostTable{{0.0, 0.2, 0.4, 0.5}});
}

// Four agents, F(i) = i^-0.9, hand-picked costs.
inline persuasion::Instance four_agent(double prior1) {
  return persuasion::Instance(4, prior1, persuasion::power_sharing(4, 0.9),
                              persuasion::CostTable{{0.0, 0.1, 0.15, 0.3, 0.32}});
}

inline persuasion::Instance power_instance(int n, double alpha, persuasion::CostFamily family, double coeff,
                                           double prior1) {
  return persuasion::Instance(n, prior1, persuasion::power_sharing(n, alpha),
                              persuasion::family_costs(n, family, coeff));
}

}  // namespace fixtures
