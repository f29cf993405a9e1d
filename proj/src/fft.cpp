#include "shiftmean/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace shiftmean::fft {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  // Planning is not thread safe in FFTW, execution on new arrays is.
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex);
    auto it = plans.find({n, sign});
    if (it != plans.end()) return it->second;
    std::vector<cplx> a(n), b(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                      reinterpret_cast<fftw_complex*>(b.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(std::pair{n, sign}, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cplx> run(std::span<const cplx> in, int sign) {
  std::vector<cplx> src(in.begin(), in.end());
  std::vector<cplx> out(in.size());
  if (in.empty()) return out;
  fftw_plan plan = cache().get(in.size(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> in) { return run(in, FFTW_FORWARD); }

std::vector<cplx> backward(std::span<const cplx> in) { return run(in, FFTW_BACKWARD); }

std::vector<cplx> forward_real(std::span<const double> in) {
  std::vector<cplx> c(in.begin(), in.end());
  return forward(c);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace shiftmean::fft
