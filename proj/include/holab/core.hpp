#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holab {

// Error taxonomy. Structural errors are shape/degree mismatches that indicate
// a programming mistake in the caller; domain errors mean a value fell outside
// the mathematical domain of an operation (non-invertible tau, singular frame);
// precondition errors are violated runtime contracts (path endpoints, flatness);
// parse errors carry scenario-file diagnostics.
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Deterministic RNG. mt19937_64 has a fully specified bit stream; the double
// mappings below avoid std::uniform_real_distribution, whose output is
// implementation-defined and would break byte-stable reports across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();                       // [0,1)
  double uniform(double lo, double hi);
  double signed_unit();                     // [-1,1)
  int uniform_int(int lo, int hi);          // inclusive bounds
  double normal();                          // Box-Muller, explicit formulas

private:
  std::uint64_t state_[312];
  int index_;
  bool have_spare_ = false;
  double spare_ = 0.0;
  void seed_state(std::uint64_t seed);
  void regenerate();
};

// Halton radical-inverse sequence, used for low-discrepancy chart sampling.
double halton(std::uint64_t index, std::uint32_t base);

// Thread cap from HOLAB_THREADS (defaults to 1; values above hardware
// concurrency are clamped). Parallel loops write into per-index slots and
// reduce sequentially afterwards, so results never depend on scheduling.
int parallelism_cap();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holab
