#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "parq/processes.hpp"
#include "parq/profile.hpp"

namespace parq {

// Profile seen by C_0 when C_{-n} found the system empty. `past` holds the
// marks of C_{-n}, ..., C_{-1} in forward-time order; the fold starts from
// the zero profile and applies pth_step with the given rank.
SortedProfile loynes_iterate(std::span<const Mark> past, std::size_t servers,
                             std::size_t rank = 1);

// Backward view of a generated stream: element k-1 of `stream` is the mark
// of C_{-k}. Folds the first n elements, oldest first. Extending the stream
// only adds customers further in the past, so M_n is monotone in n.
SortedProfile loynes_backward(const MarkSequence& stream, std::size_t n, std::size_t servers,
                              std::size_t rank = 1);

struct LoynesOptions {
  double tolerance = 1e-6;
  std::size_t window = 64;
  std::size_t max_n = std::size_t{1} << 22;
};

struct LoynesResult {
  SortedProfile profile;
  std::size_t steps_used;
  bool converged;
  double last_increment;  // sup-norm of M_n - M_{n/2}
};

// Called with (n, M_n) at every doubling.
using LoynesSnapshot = std::function<void(std::size_t, const SortedProfile&)>;

// Doubling schedule n = window, 2 window, 4 window, ... up to max_n. The
// backward stream is regenerated from `seed` at every n. Converged when two
// successive estimates differ by at most `tolerance` in sup-norm.
//
// Throws InstabilityError unless the model is stable for servers - rank + 1
// servers (critical counts as unstable), ConfigError on bad options.
LoynesResult estimate_stationary(const InputModel& model, std::uint64_t seed,
                                 std::size_t servers, std::size_t rank,
                                 const LoynesOptions& options = {},
                                 const LoynesSnapshot& snapshot = {});

}  // namespace parq
