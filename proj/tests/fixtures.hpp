#pragma once

#include "tmep/model.hpp"

#include <cmath>
#include <vector>

namespace fx {

// Saddle pair of order 3 at k = +-acos(-1/sqrt(12)).
inline const std::vector<double> kSaddle{1.0, std::sqrt(3.0) / 4.0, 0.25};
// Order-4 minimum at k = pi.
inline const std::vector<double> kQuartic{1.0, 37.0 / 40.0, 3.0 / 10.0};
// Order-6 maximum at k = pi.
inline const std::vector<double> kSextic{1.0, 2.0 / 5.0, 1.0 / 15.0};

inline const double kStar = std::acos(-1.0 / std::sqrt(12.0));

inline tmep::LatticeModel saddle() { return tmep::LatticeModel(kSaddle); }
inline tmep::LatticeModel quartic() { return tmep::LatticeModel(kQuartic); }
inline tmep::LatticeModel sextic() { return tmep::LatticeModel(kSextic); }
inline tmep::LatticeModel cosine() { return tmep::LatticeModel({1.0}); }

} // namespace fx
