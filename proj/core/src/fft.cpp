#include "phasespace/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace phasespace::fft {
namespace {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are created once
// per shape with FFTW_UNALIGNED so they can be reused on any buffer.
class PlanCache {
 public:
  using Key = std::tuple<int, int, int, int, int, int, int>;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Key& key) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto [rank, n0, n1, count, stride, dist, sign] = key;
    std::vector<cplx> scratch(static_cast<std::size_t>(rank == 1 ? (count - 1) * dist + (n0 - 1) * stride + 1
                                                                  : n0 * n1));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (rank == 1) {
      int dims[1] = {n0};
      plan = fftw_plan_many_dft(1, dims, count, buf, nullptr, stride, dist, buf, nullptr, stride, dist,
                                sign, flags);
    } else {
      plan = fftw_plan_dft_2d(n0, n1, buf, buf, sign, flags);
    }
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void many(std::span<cplx> data, int n, int count, int stride, int dist, Direction dir) {
  if (n <= 0 || count <= 0) return;
  fftw_plan plan = cache().get({1, n, 0, count, stride, dist, sign_of(dir)});
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void two_d(std::span<cplx> data, int rows, int cols, Direction dir) {
  fftw_plan plan = cache().get({2, rows, cols, 1, 1, 1, sign_of(dir)});
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace phasespace::fft
