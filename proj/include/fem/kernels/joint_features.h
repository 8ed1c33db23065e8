#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fem::kernels {

// Dense inputs for the bilinear formula/resource fusion.
//   fpf: formulas x M, row-major.
//   orf: formulas x resources x K, row-major.
// Output: resources x (M*K), entry [r][m*K + k] = sum_f fpf[f][m] * orf[f][r][k].
struct JointShape {
  std::size_t formulas = 0;
  std::size_t resources = 0;
  std::size_t m = 0;
  std::size_t k = 0;
};

std::vector<double> JointFeaturesSerial(const JointShape& shape, std::span<const double> fpf,
                                        std::span<const double> orf);
std::vector<double> JointFeaturesParallel(const JointShape& shape, std::span<const double> fpf,
                                          std::span<const double> orf);

}  // namespace fem::kernels
