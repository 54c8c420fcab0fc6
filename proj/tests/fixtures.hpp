#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "bkg/immersion.hpp"

namespace fixture {

// 3 x 3 grid over a parameter box
inline std::vector<Eigen::VectorXd> grid(const std::vector<bkg::ParameterRange>& box) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd u(2);
      u << box[0].lo + (box[0].hi - box[0].lo) * i / 2.0, box[1].lo + (box[1].hi - box[1].lo) * j / 2.0;
      out.push_back(u);
    }
  return out;
}

inline std::vector<Eigen::VectorXd> grid(const bkg::Immersion& imm) { return grid(imm.default_domain); }

// unit directions c_k = (cos(k pi / 8), sin(k pi / 8))
inline std::vector<Eigen::VectorXd> directions(int count = 8) {
  std::vector<Eigen::VectorXd> out;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd c(2);
    c << std::cos(std::numbers::pi * k / count), std::sin(std::numbers::pi * k / count);
    out.push_back(c);
  }
  return out;
}

inline const std::vector<std::string>& surfaces() {
  static const std::vector<std::string> names = {"sphere", "cylinder", "complex_plane", "totally_real_plane",
                                                 "slant_plane"};
  return names;
}

}  // namespace fixture
