#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace gch2::detail {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW_ESTIMATE keeps plan selection deterministic; FFTW_UNALIGNED lets the
// plans run on std::vector storage of any alignment.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    std::vector<double> real(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair pair;
    pair.r2c = fftw_plan_dft_r2c_1d(size, real.data(), reinterpret_cast<fftw_complex*>(spec.data()), flags);
    pair.c2r = fftw_plan_dft_c2r_1d(size, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                    flags | FFTW_DESTROY_INPUT);
    if (pair.r2c == nullptr || pair.c2r == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(n, pair);
    return pair;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [n, pair] : plans_) {
      fftw_destroy_plan(pair.r2c);
      fftw_destroy_plan(pair.c2r);
    }
  }

  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

}  // namespace

void forward_r2c(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw std::invalid_argument("forward_r2c: output size mismatch");
  const PlanPair plans = PlanCache::instance().get(n);
  // r2c does not modify its input, but the FFTW signature is not const.
  std::vector<double> buffer(in.begin(), in.end());
  fftw_execute_dft_r2c(plans.r2c, buffer.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

void backward_c2r(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw std::invalid_argument("backward_c2r: input size mismatch");
  const PlanPair plans = PlanCache::instance().get(n);
  std::vector<std::complex<double>> buffer(in.begin(), in.end());
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(buffer.data()), out.data());
}

}  // namespace gch2::detail
