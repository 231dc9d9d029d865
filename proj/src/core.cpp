#include "holab/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace holab {

// mt19937_64 per Matsumoto-Nishimura constants.
namespace {
constexpr int kNN = 312;
constexpr int kMM = 156;
constexpr std::uint64_t kMatrixA = 0xB5026F5AA96619E9ULL;
constexpr std::uint64_t kUpperMask = 0xFFFFFFFF80000000ULL;
constexpr std::uint64_t kLowerMask = 0x7FFFFFFFULL;
}  // namespace

Rng::Rng(std::uint64_t seed) { seed_state(seed); }

void Rng::seed_state(std::uint64_t seed) {
  state_[0] = seed;
  for (int i = 1; i < kNN; ++i) {
    state_[i] =
        6364136223846793005ULL * (state_[i - 1] ^ (state_[i - 1] >> 62)) + i;
  }
  index_ = kNN;
}

void Rng::regenerate() {
  for (int i = 0; i < kNN; ++i) {
    std::uint64_t x = (state_[i] & kUpperMask) | (state_[(i + 1) % kNN] & kLowerMask);
    std::uint64_t xa = x >> 1;
    if (x & 1ULL) xa ^= kMatrixA;
    state_[i] = state_[(i + kMM) % kNN] ^ xa;
  }
  index_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (index_ >= kNN) regenerate();
  std::uint64_t x = state_[index_++];
  x ^= (x >> 29) & 0x5555555555555555ULL;
  x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
  x ^= (x << 37) & 0xFFF7EEE000000000ULL;
  x ^= x >> 43;
  return x;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::signed_unit() { return 2.0 * uniform01() - 1.0; }

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01(), u2 = uniform01();
  while (u1 <= 1e-300) u1 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

int parallelism_cap() {
  const char* env = std::getenv("HOLAB_THREADS");
  int cap = 1;
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = static_cast<int>(std::min<long>(v, 256));
  }
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw > 0) cap = std::min(cap, hw);
  return std::max(cap, 1);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int threads = std::min<std::size_t>(parallelism_cap(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace holab
