#include "parq/loynes.hpp"

#include <string>

#include "parq/csv.hpp"
#include "parq/error.hpp"

namespace parq {

SortedProfile loynes_iterate(std::span<const Mark> past, std::size_t servers,
                             std::size_t rank) {
  if (rank < 1 || rank > servers) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(servers) + "]");
  }
  SortedProfile m = SortedProfile::zeros(servers);
  for (const Mark& mark : past) {
    m = pth_step(m, mark, rank);
  }
  return m;
}

SortedProfile loynes_backward(const MarkSequence& stream, std::size_t n, std::size_t servers,
                              std::size_t rank) {
  if (n > stream.size()) {
    throw DomainError("backward stream holds " + std::to_string(stream.size()) +
                      " marks, " + std::to_string(n) + " requested");
  }
  if (rank < 1 || rank > servers) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(servers) + "]");
  }
  SortedProfile m = SortedProfile::zeros(servers);
  for (std::size_t k = n; k >= 1; --k) {
    m = pth_step(m, stream[k - 1], rank);
  }
  return m;
}

LoynesResult estimate_stationary(const InputModel& model, std::uint64_t seed,
                                 std::size_t servers, std::size_t rank,
                                 const LoynesOptions& options, const LoynesSnapshot& snapshot) {
  if (rank < 1 || rank > servers) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(servers) + "]");
  }
  if (!(options.tolerance > 0.0)) {
    throw ConfigError("loynes tolerance must be > 0");
  }
  if (options.window < 1 || options.max_n < options.window) {
    throw ConfigError("loynes options need 1 <= window <= max_n");
  }

  const std::size_t effective = servers - rank + 1;
  const Stability stability = stability_check(model, effective);
  if (stability != Stability::stable) {
    const double load = mean_sigma(model).value;
    const double capacity = static_cast<double>(effective) * mean_xi(model).value;
    throw InstabilityError("model is " + std::string(to_string(stability)) + " for " +
                               std::to_string(effective) + " effective servers: E[sigma] = " +
                               format_number(load) + ", servers * E[xi] = " +
                               format_number(capacity),
                           load, capacity);
  }

  std::size_t n = options.window;
  SortedProfile previous = loynes_backward(generate(model, seed, n), n, servers, rank);
  if (snapshot) snapshot(n, previous);

  double increment = 0.0;
  bool have_increment = false;
  while (n <= options.max_n / 2) {
    const std::size_t next_n = 2 * n;
    SortedProfile current = loynes_backward(generate(model, seed, next_n), next_n, servers, rank);
    if (snapshot) snapshot(next_n, current);
    increment = sup_distance(current, previous);
    have_increment = true;
    n = next_n;
    previous = std::move(current);
    if (increment <= options.tolerance) {
      return LoynesResult{std::move(previous), n, true, increment};
    }
  }
  return LoynesResult{std::move(previous), n, false,
                      have_increment ? increment : 0.0};
}

}  // namespace parq
