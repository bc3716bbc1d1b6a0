#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rsphoton/vec3.hpp"

namespace rsphoton::fft {

enum class Direction { to_space, to_spectrum };

/// In-place unnormalized 3-D DFT of an n^3 row-major array.
///   to_space:    f(r_j) = sum_m F_m exp(+2 pi i m.j / n)
///   to_spectrum: F_m    = sum_j f_j exp(-2 pi i m.j / n)
inline void transform3(std::span<cplx> data, int n, Direction dir) {
  static_assert(sizeof(cplx) == sizeof(fftw_complex));
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_3d(n, n, n, p, p, dir == Direction::to_space ? FFTW_BACKWARD : FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

/// Componentwise transform of a vector field stored as n^3 CVec3 samples.
inline void transform3(std::vector<CVec3>& field, int n, Direction dir) {
  const std::size_t total = field.size();
  std::vector<cplx> scratch(total);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < total; ++i) scratch[i] = field[i][c];
    transform3(scratch, n, dir);
    for (std::size_t i = 0; i < total; ++i) field[i][c] = scratch[i];
  }
}

}  // namespace rsphoton::fft
