#include "parq/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parq/error.hpp"

namespace parq {

Mark::Mark(double sigma, double xi) : sigma_(sigma), xi_(xi) {
  if (!std::isfinite(sigma) || !std::isfinite(xi)) {
    throw DomainError("mark fields must be finite");
  }
  if (sigma < 0.0) {
    throw DomainError("mark sigma must be >= 0, got " + std::to_string(sigma));
  }
  if (!(xi > 0.0)) {
    throw DomainError("mark xi must be > 0, got " + std::to_string(xi));
  }
}

SortedProfile::SortedProfile(std::vector<double> workloads)
    : workloads_(std::move(workloads)) {
  if (workloads_.empty()) {
    throw DomainError("profile must have at least one server");
  }
  for (std::size_t i = 0; i < workloads_.size(); ++i) {
    const double w = workloads_[i];
    if (!std::isfinite(w)) {
      throw DomainError("profile coordinate " + std::to_string(i + 1) + " is not finite");
    }
    if (w < 0.0) {
      throw DomainError("profile coordinate " + std::to_string(i + 1) + " is negative");
    }
    if (i > 0 && w < workloads_[i - 1]) {
      throw DomainError("profile is not sorted at coordinate " + std::to_string(i + 1));
    }
  }
}

SortedProfile SortedProfile::zeros(std::size_t servers) {
  if (servers == 0) {
    throw DomainError("profile must have at least one server");
  }
  return SortedProfile(Trusted{}, std::vector<double>(servers, 0.0));
}

std::vector<double> sorted_copy(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw DomainError("cannot sort a vector with a non-finite entry");
    }
  }
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

SortedProfile sort_ascending(std::span<const double> v) {
  if (v.empty()) {
    throw DomainError("profile must have at least one server");
  }
  std::vector<double> out = sorted_copy(v);
  if (out.front() < 0.0) {
    throw DomainError("workloads must be nonnegative");
  }
  return SortedProfile(SortedProfile::Trusted{}, std::move(out));
}

SortedProfile kw_step(const SortedProfile& u, const Mark& m) {
  std::vector<double> next(u.workloads_);
  next[0] += m.sigma();
  for (double& w : next) {
    w = std::max(w - m.xi(), 0.0);
  }
  std::sort(next.begin(), next.end());
  return SortedProfile(SortedProfile::Trusted{}, std::move(next));
}

SortedProfile pth_step(const SortedProfile& u, const Mark& m, std::size_t rank) {
  if (rank < 1 || rank > u.size()) {
    throw DomainError("allocation rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(u.size()) + "]");
  }
  std::vector<double> next(u.workloads_);
  next[rank - 1] += m.sigma();
  for (double& w : next) {
    w = std::max(w - m.xi(), 0.0);
  }
  std::sort(next.begin(), next.end());
  return SortedProfile(SortedProfile::Trusted{}, std::move(next));
}

SortedProfile pad(const SortedProfile& p, std::size_t servers) {
  if (servers < p.size()) {
    throw DomainError("cannot pad a " + std::to_string(p.size()) + "-server profile to " +
                      std::to_string(servers) + " servers");
  }
  std::vector<double> out(servers - p.size(), 0.0);
  out.insert(out.end(), p.begin(), p.end());
  return SortedProfile(SortedProfile::Trusted{}, std::move(out));
}

// Accumulated from the largest coordinate down, so leading zeros from pad()
// never change the rounding of the sum.
double total_workload(const SortedProfile& u) noexcept {
  double sum = 0.0;
  for (auto it = u.values().rbegin(); it != u.values().rend(); ++it) {
    sum += *it;
  }
  return sum;
}

double offered_wait(const SortedProfile& u) noexcept { return u[0]; }

double sup_distance(const SortedProfile& a, const SortedProfile& b) {
  if (a.size() != b.size()) {
    throw DomainError("profile lengths differ");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace parq
