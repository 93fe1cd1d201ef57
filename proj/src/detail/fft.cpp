#include "detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace lyz::detail {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array API is.
std::mutex g_plan_mutex;

const Plans& plans_for(const TorusGrid& grid) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard lock(g_plan_mutex);
  auto [it, inserted] = cache.try_emplace({grid.n(), grid.N()});
  if (inserted) {
    std::vector<int> dims(grid.axes(), grid.N());
    std::vector<double> real(grid.points());
    std::vector<std::complex<double>> cpx(grid.spectral_points());
    auto* c = reinterpret_cast<fftw_complex*>(cpx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    it->second.r2c = fftw_plan_dft_r2c(grid.axes(), dims.data(), real.data(), c, flags);
    it->second.c2r = fftw_plan_dft_c2r(grid.axes(), dims.data(), c, real.data(), flags | FFTW_DESTROY_INPUT);
  }
  return it->second;
}

}  // namespace

std::vector<std::complex<double>> forward(const TorusGrid& grid, std::span<const double> in) {
  const Plans& p = plans_for(grid);
  std::vector<std::complex<double>> out(grid.spectral_points());
  // Out-of-place r2c plans preserve their input by default.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

void backward(const TorusGrid& grid, std::vector<std::complex<double>>& spec, std::span<double> out) {
  const Plans& p = plans_for(grid);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  const double scale = 1.0 / static_cast<double>(grid.points());
  for (double& v : out) v *= scale;
}

}  // namespace lyz::detail
