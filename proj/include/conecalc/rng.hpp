#pragma once

#include <complex>
#include <cstdint>

namespace conecalc {

// Hash-mix a master seed with a counter. Used to hand out independent
// sub-seeds (restarts, trials) so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Counter-based generator: the i-th draw is a pure function of (key, i).
// Normal variates use Box-Muller on our own uniforms, so streams are
// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int lo, int hi);       // inclusive range
  double normal();
  std::complex<double> complex_normal();  // E|z|^2 = 1

  // Independent child stream; does not advance this generator.
  Rng fork(std::uint64_t index) const;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace conecalc
