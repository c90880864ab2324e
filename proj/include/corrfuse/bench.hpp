// Per-step cost measurement for the four filters on an in-memory synthetic
// stream, plus a static per-step operation profile.
#pragma once

#include <cstdint>
#include <string>

namespace corrfuse {

enum class Algorithm { kGd, kCgd, kDoe, kCdoe };

Algorithm algorithm_from_name(const std::string& name);  // throws on unknown
std::string algorithm_name(Algorithm a);

struct BenchResult {
  double ns_per_step{0.0};   // best mean over the repeats
  double steps_per_sec{0.0};
  std::size_t steps{0};
  int repeats{0};
};

/// Times full filter steps (normalization included) over a random-walk
/// stream; reports the fastest repeat to suppress scheduling noise.
BenchResult bench_filter(Algorithm algo, std::size_t steps, int repeats,
                         std::uint64_t seed = 42);

/// Expected dominant per-step operations, from the algorithm structure.
struct OperationProfile {
  int quaternion_products{0};
  int kernel_evaluations{0};  // Gaussian kernel (exp) calls
  int trig_calls{0};          // acos / sincos
  int square_roots{0};
};

OperationProfile operation_profile(Algorithm a);

}  // namespace corrfuse
