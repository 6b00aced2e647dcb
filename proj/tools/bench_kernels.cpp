// Times the serial reference kernels against their OpenMP variants at the
// shapes the training loop actually hits, plus one full network step.

#include <chrono>
#include <cstdio>
#include <functional>

#include "acrnn/kernels.hpp"
#include "acrnn/network.hpp"
#include "acrnn/rng.hpp"

using namespace acrnn;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() / reps;
}

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-1.0, 1.0);
  return t;
}

void bench_matmul(std::size_t n, std::size_t k, std::size_t m, int reps) {
  Rng rng(1);
  const Tensor a = random_tensor({n, k}, rng);
  const Tensor b = random_tensor({k, m}, rng);
  Tensor c({n, m});
  const double serial =
      time_ms([&] { kernels::matmul_serial(a.data(), b.data(), c.data(), n, k, m); }, reps);
  const double omp =
      time_ms([&] { kernels::matmul_omp(a.data(), b.data(), c.data(), n, k, m); }, reps);
  const double gflop = 2.0 * n * k * m * 1e-6;
  std::printf("matmul %4zux%-4zu * %4zux%-4zu  serial %8.3f ms (%6.2f GFLOP/s)  omp %8.3f ms (%6.2f GFLOP/s)  speedup %.2fx\n",
              n, k, k, m, serial, gflop / serial, omp, gflop / omp, serial / omp);
}

void bench_map(std::size_t n, int reps) {
  Rng rng(2);
  const Tensor x = random_tensor({n}, rng);
  Tensor y({n});
  const double serial = time_ms([&] { kernels::sigmoid_serial(x.data(), y.data(), n); }, reps);
  const double omp = time_ms([&] { kernels::sigmoid_omp(x.data(), y.data(), n); }, reps);
  std::printf("sigmoid n=%-8zu            serial %8.3f ms                 omp %8.3f ms                 speedup %.2fx\n",
              n, serial, omp, serial / omp);
}

void bench_network_step(std::size_t batch, std::size_t hidden, int reps) {
  NetworkConfig config{27, hidden, 3};
  Rng rng(3);
  const NetworkParams params = init_params(config, rng);
  NetworkMemory memory = NetworkMemory::zeros(config, batch);
  const Tensor input = random_tensor({batch, config.input_dim}, rng);
  const double ms = time_ms([&] { (void)network_step(params, memory, input); }, reps);
  std::printf("network_step batch=%-3zu hidden=%-4zu  %8.3f ms\n", batch, hidden, ms);
}

}  // namespace

int main() {
  std::printf("thread cap: %d (set ACRNN_THREADS to change)\n\n", kernels::thread_cap());
  bench_matmul(8, 256, 128, 200);
  bench_matmul(32, 256, 128, 200);
  bench_matmul(256, 32, 128, 200);
  bench_matmul(128, 512, 512, 50);
  bench_matmul(512, 512, 512, 20);
  std::printf("\n");
  bench_map(1024, 1000);
  bench_map(1 << 20, 20);
  std::printf("\n");
  bench_network_step(1, 128, 200);
  bench_network_step(8, 128, 100);
  bench_network_step(32, 1024, 10);
  return 0;
}
