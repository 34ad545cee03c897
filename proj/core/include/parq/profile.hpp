#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace parq {

// One customer's mark: the service it requests and the gap until the next
// arrival. sigma >= 0, xi > 0; both finite.
class Mark {
 public:
  Mark(double sigma, double xi);

  double sigma() const noexcept { return sigma_; }
  double xi() const noexcept { return xi_; }

  friend bool operator==(const Mark&, const Mark&) = default;

 private:
  double sigma_;
  double xi_;
};

// Residual workloads of S servers seen by an arriving customer, sorted
// nondecreasingly. Coordinate 0 is the offered waiting time.
//
// Values are immutable once built. Every constructor path checks the
// invariants (finite, nonnegative, nondecreasing, S >= 1).
class SortedProfile {
 public:
  // Validates an already-sorted vector; throws DomainError otherwise.
  explicit SortedProfile(std::vector<double> workloads);

  static SortedProfile zeros(std::size_t servers);

  std::size_t size() const noexcept { return workloads_.size(); }
  double operator[](std::size_t i) const noexcept { return workloads_[i]; }
  std::span<const double> values() const noexcept { return workloads_; }
  auto begin() const noexcept { return workloads_.begin(); }
  auto end() const noexcept { return workloads_.end(); }

  friend bool operator==(const SortedProfile&, const SortedProfile&) = default;

 private:
  struct Trusted {};
  SortedProfile(Trusted, std::vector<double> workloads) noexcept
      : workloads_(std::move(workloads)) {}

  friend SortedProfile sort_ascending(std::span<const double>);
  friend SortedProfile kw_step(const SortedProfile&, const Mark&);
  friend SortedProfile pth_step(const SortedProfile&, const Mark&, std::size_t);
  friend SortedProfile pad(const SortedProfile&, std::size_t);

  std::vector<double> workloads_;
};

// Nondecreasing rearrangement of a nonnegative finite vector.
SortedProfile sort_ascending(std::span<const double> v);

// Same rearrangement on all of R^S (negatives allowed); used by the
// majorization machinery.
std::vector<double> sorted_copy(std::span<const double> v);

// Kiefer-Wolfowitz map: sort([u + sigma e_1 - xi 1]^+).
SortedProfile kw_step(const SortedProfile& u, const Mark& m);

// Allocation to the queue with the rank-th least workload (rank is 1-based):
// sort([u + sigma e_rank - xi 1]^+). rank == 1 gives kw_step bit for bit.
SortedProfile pth_step(const SortedProfile& u, const Mark& m, std::size_t rank);

// Embeds an N-server profile into S >= N servers by prepending S - N zeros.
SortedProfile pad(const SortedProfile& p, std::size_t servers);

double total_workload(const SortedProfile& u) noexcept;
double offered_wait(const SortedProfile& u) noexcept;

// max_i |a(i) - b(i)|; lengths must agree.
double sup_distance(const SortedProfile& a, const SortedProfile& b);

}  // namespace parq
