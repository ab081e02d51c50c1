#include "eslab/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

#include "eslab/errors.hpp"

namespace eslab {

namespace {

// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw BudgetError("FFT buffer allocation failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::size_t good_size(std::size_t n) {
  // Smallest 2^a 3^b 5^c >= n.
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
    for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
      std::size_t v = p35;
      while (v < n) v *= 2;
      best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace

std::vector<double> convolution_power(std::span<const double> a, int s) {
  if (s < 1) throw ConfigError("convolution_power: s must be >= 1");
  if (a.empty()) return {};
  const std::size_t out_len = static_cast<std::size_t>(s) * (a.size() - 1) + 1;
  if (s == 1) return {a.begin(), a.end()};
  const std::size_t n = good_size(out_len);
  const std::size_t nc = n / 2 + 1;
  FftwBuffer real_buf(sizeof(double) * n);
  FftwBuffer cplx_buf(sizeof(fftw_complex) * nc);
  auto* real = static_cast<double*>(real_buf.ptr);
  auto* cplx = static_cast<fftw_complex*>(cplx_buf.ptr);
  std::unique_ptr<Plan> forward;
  std::unique_ptr<Plan> inverse;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE));
    inverse = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE));
  }
  std::fill(real, real + n, 0.0);
  std::copy(a.begin(), a.end(), real);
  forward->execute();
  for (std::size_t i = 0; i < nc; ++i) {
    std::complex<double> z(cplx[i][0], cplx[i][1]);
    std::complex<double> p = z;
    for (int e = 1; e < s; ++e) p *= z;
    cplx[i][0] = p.real();
    cplx[i][1] = p.imag();
  }
  inverse->execute();
  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = real[i] * scale;
  return out;
}

std::vector<std::complex<double>> dft_positive(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  FftwBuffer in_buf(sizeof(fftw_complex) * n);
  FftwBuffer out_buf(sizeof(fftw_complex) * n);
  auto* in = static_cast<fftw_complex*>(in_buf.ptr);
  auto* out = static_cast<fftw_complex*>(out_buf.ptr);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = x[i];
    in[i][1] = 0.0;
  }
  plan->execute();
  std::vector<std::complex<double>> result(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = {out[i][0], out[i][1]};
  return result;
}

}  // namespace eslab
