#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "parq/processes.hpp"
#include "parq/profile.hpp"

namespace parq {

// S servers, allocation to the rank-th least workload (rank 1 is JSW),
// starting from `initial`.
struct SystemConfig {
  std::size_t servers;
  std::size_t rank;
  SortedProfile initial;

  static SystemConfig jsw(std::size_t servers) {
    return SystemConfig{servers, 1, SortedProfile::zeros(servers)};
  }

  // Throws DomainError on rank or length mismatch.
  void validate() const;
  // e.g. "S3P1"
  std::string label() const;
};

struct MarksId {
  std::uint64_t seed;
  std::string model;
  std::size_t length;
};

// V_0 ... V_n with V_{k+1} = pth_step(V_k, marks[k], rank).
struct Trajectory {
  std::vector<SortedProfile> profiles;
  SystemConfig config;
  MarksId marks_id;
};

struct TrajectoryOptions {
  // Full histories beyond this many steps are refused; use for_each_profile.
  std::size_t max_stored_steps = 100'000;
};

Trajectory run_trajectory(const SystemConfig& config, const MarkSequence& marks,
                          const TrajectoryOptions& options = {});

// Streaming fold: calls visit(k, V_k) for k = 0 .. marks.size() without
// storing the history.
void for_each_profile(const SystemConfig& config, std::span<const Mark> marks,
                      const std::function<void(std::size_t, const SortedProfile&)>& visit);

struct Violation {
  std::size_t step;
  std::string inequality;
  double lhs;
  double rhs;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct SystemSummary {
  std::string label;
  double mean_total_workload = 0.0;
  double max_total_workload = 0.0;
  double mean_offered_wait = 0.0;
  double final_offered_wait = 0.0;
};

// At most one violation is recorded per step: the first failing inequality
// in the checking order documented on each verifier.
struct ComparisonReport {
  std::size_t steps_checked = 0;
  std::vector<Violation> violations;
  std::vector<SystemSummary> systems;
  MarksId marks_id;

  bool pass() const noexcept { return violations.empty(); }
};

struct VerifyOptions {
  // Slack on accumulated sums (relative to max(1, |rhs|)); coordinates are
  // compared exactly.
  double sum_slack = 1e-12;
  // Test hook: at this step the larger / JSW system's checked profile has
  // its top coordinate inflated, without feeding back into the recursion.
  std::optional<std::size_t> corrupt_step;
};

// JSW with S servers vs JSW with N <= S servers, both from empty, on the same
// marks. At every step n = 0 .. L checks, in order:
//   offered_rank_l  M^S_n(S-N+l) <= M^N_n(l)          for l in [1, N]
//   total           sum M^S_n <= sum M^N_n
//   tail_sum_k      M^S_n ≺_* pad(M^N_n, S)             for k in [1, S]
//   coord_l         M^S_n(l) <= pad(M^N_n, S)(l)        for l in [S-N+1, S]
ComparisonReport verify_theorem1(std::size_t servers, std::size_t smaller,
                                 const MarkSequence& marks, const VerifyOptions& options = {});

// JSW from v0 vs rank-th least workload from v0_tilde, same marks. Checks
// V_n ≺_P Ṽ_n at every step (tail sums first, then coordinates >= rank).
// Throws PreconditionError naming the failing clause unless v0 ≺_P v0_tilde.
ComparisonReport verify_theorem2(std::size_t rank, const SortedProfile& v0,
                                 const SortedProfile& v0_tilde, const MarkSequence& marks,
                                 const VerifyOptions& options = {});

// Event-driven multi-server FCFS queue in absolute time. Returns the waiting
// time W_k of each customer. Ties among free servers go to the lowest index.
std::vector<double> fcfs_oracle(std::span<const Mark> marks, std::size_t servers);

// sup_x |F_a(x) - F_b(x)| over the merged sample.
double ks_statistic(std::span<const double> a, std::span<const double> b);

struct EcdfDominance {
  bool dominates;             // F_a >= F_b - slack everywhere
  double violating_fraction;  // share of grid points with F_b - F_a > slack
  double max_violation;       // max(F_b - F_a, 0)
  double slack;
};

// Diagnostic for "a is stochastically smaller than b". Default slack is the
// 95% two-sample KS band 1.36 sqrt((m + n) / (m n)).
EcdfDominance ecdf_dominance(std::span<const double> a, std::span<const double> b,
                             std::optional<double> slack = std::nullopt);

// CSV writers. Trajectory rows: step,system,coordinate,value. Violation rows:
// seed,inequality,step,lhs,rhs.
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, std::string_view system_id,
                           std::size_t step, const SortedProfile& profile);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_violations_header(std::ostream& out);
void write_violations_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace parq
