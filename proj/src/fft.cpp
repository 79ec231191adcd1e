#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace curveflow::fft {
namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Planning-time buffers double as the per-thread work arrays: every buffer
// comes from fftw_malloc, so all share the alignment the plans were made for.
struct Buffers {
  std::unique_ptr<double, FftwFree> real;
  std::unique_ptr<fftw_complex, FftwFree> cplx;

  explicit Buffers(int n)
      : real(static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n)))),
        cplx(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1)))) {}
};

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// The FFTW planner is not thread-safe; fftw_execute_dft_* is.
std::mutex plan_mutex;

// FFTW_ESTIMATE keeps the chosen algorithm, and therefore every result bit,
// identical from one process to the next.
const Plans& plans_for(int n) {
  thread_local int last_n = 0;
  thread_local const Plans* last = nullptr;
  if (n == last_n) return *last;
  static std::map<int, Plans> cache;
  std::lock_guard lock(plan_mutex);
  last_n = n;
  auto it = cache.find(n);
  if (it != cache.end()) return *(last = &it->second);
  Buffers scratch(n);
  Plans p;
  p.r2c = fftw_plan_dft_r2c_1d(n, scratch.real.get(), scratch.cplx.get(), FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_1d(n, scratch.cplx.get(), scratch.real.get(), FFTW_ESTIMATE);
  return *(last = &cache.emplace(n, p).first->second);
}

Buffers& buffers_for(int n) {
  thread_local int last_n = 0;
  thread_local Buffers* last = nullptr;
  if (n == last_n) return *last;
  thread_local std::map<int, Buffers> local;
  auto it = local.find(n);
  if (it == local.end()) it = local.emplace(n, Buffers(n)).first;
  last_n = n;
  return *(last = &it->second);
}

}  // namespace

void forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  const Plans& p = plans_for(n);
  Buffers& b = buffers_for(n);
  std::copy(in.begin(), in.end(), b.real.get());
  fftw_execute_dft_r2c(p.r2c, b.real.get(), b.cplx.get());
  const double scale = 1.0 / n;
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {b.cplx.get()[k][0] * scale, b.cplx.get()[k][1] * scale};
}

void inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  const Plans& p = plans_for(n);
  Buffers& b = buffers_for(n);
  for (std::size_t k = 0; k < in.size(); ++k) {
    b.cplx.get()[k][0] = in[k].real();
    b.cplx.get()[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(p.c2r, b.cplx.get(), b.real.get());
  std::copy(b.real.get(), b.real.get() + n, out.begin());
}

}  // namespace curveflow::fft
