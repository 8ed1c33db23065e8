#include "fem/kernels/joint_features.h"

#include <stdexcept>

namespace fem::kernels {
namespace {

void CheckShape(const JointShape& s, std::span<const double> fpf, std::span<const double> orf) {
  if (fpf.size() != s.formulas * s.m || orf.size() != s.formulas * s.resources * s.k) {
    throw std::invalid_argument("joint feature inputs do not match the declared shape");
  }
}

// Formula-major accumulation keeps the summation order fixed per output cell.
void Resource(const JointShape& s, std::span<const double> fpf, std::span<const double> orf,
              std::size_t r, double* out) {
  const std::size_t width = s.m * s.k;
  for (std::size_t i = 0; i < width; ++i) out[i] = 0.0;
  for (std::size_t f = 0; f < s.formulas; ++f) {
    const double* p = fpf.data() + f * s.m;
    const double* q = orf.data() + (f * s.resources + r) * s.k;
    for (std::size_t mi = 0; mi < s.m; ++mi) {
      if (p[mi] == 0.0) continue;
      for (std::size_t ki = 0; ki < s.k; ++ki) out[mi * s.k + ki] += p[mi] * q[ki];
    }
  }
}

}  // namespace

std::vector<double> JointFeaturesSerial(const JointShape& shape, std::span<const double> fpf,
                                        std::span<const double> orf) {
  CheckShape(shape, fpf, orf);
  std::vector<double> out(shape.resources * shape.m * shape.k);
  for (std::size_t r = 0; r < shape.resources; ++r) {
    Resource(shape, fpf, orf, r, out.data() + r * shape.m * shape.k);
  }
  return out;
}

std::vector<double> JointFeaturesParallel(const JointShape& shape, std::span<const double> fpf,
                                          std::span<const double> orf) {
  CheckShape(shape, fpf, orf);
  std::vector<double> out(shape.resources * shape.m * shape.k);
  const std::size_t n = shape.resources;
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < n; ++r) {
    Resource(shape, fpf, orf, r, out.data() + r * shape.m * shape.k);
  }
  return out;
}

}  // namespace fem::kernels
