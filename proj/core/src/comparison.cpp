#include "parq/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "parq/csv.hpp"
#include "parq/error.hpp"
#include "parq/orderings.hpp"

namespace parq {
namespace {

class RunningSummary {
 public:
  explicit RunningSummary(std::string label) { summary_.label = std::move(label); }

  void add(const SortedProfile& p) {
    const double total = total_workload(p);
    ++count_;
    const double n = static_cast<double>(count_);
    summary_.mean_total_workload += (total - summary_.mean_total_workload) / n;
    summary_.mean_offered_wait += (offered_wait(p) - summary_.mean_offered_wait) / n;
    summary_.max_total_workload = std::max(summary_.max_total_workload, total);
    summary_.final_offered_wait = offered_wait(p);
  }

  SystemSummary result() const { return summary_; }

 private:
  SystemSummary summary_;
  std::size_t count_ = 0;
};

double sum_tolerance(double slack, double rhs) { return slack * std::max(1.0, std::abs(rhs)); }

SortedProfile inflate_top(const SortedProfile& p) {
  std::vector<double> v(p.begin(), p.end());
  v.back() += 1.0e6 + 2.0 * v.back();
  return SortedProfile(std::move(v));
}

std::optional<Violation> as_violation(std::size_t step, const OrderVerdict& verdict) {
  if (verdict.holds()) return std::nullopt;
  const auto& v = *verdict.violation;
  return Violation{step, v.clause + "_" + std::to_string(v.index), v.lhs, v.rhs};
}

MarksId id_of(const MarkSequence& marks) {
  return MarksId{marks.seed(), marks.model(), marks.size()};
}

}  // namespace

void SystemConfig::validate() const {
  if (servers < 1) {
    throw DomainError("system needs at least one server");
  }
  if (rank < 1 || rank > servers) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(servers) + "]");
  }
  if (initial.size() != servers) {
    throw DomainError("initial profile has " + std::to_string(initial.size()) +
                      " coordinates for " + std::to_string(servers) + " servers");
  }
}

std::string SystemConfig::label() const {
  return "S" + std::to_string(servers) + "P" + std::to_string(rank);
}

void for_each_profile(const SystemConfig& config, std::span<const Mark> marks,
                      const std::function<void(std::size_t, const SortedProfile&)>& visit) {
  config.validate();
  SortedProfile v = config.initial;
  visit(0, v);
  for (std::size_t k = 0; k < marks.size(); ++k) {
    v = pth_step(v, marks[k], config.rank);
    visit(k + 1, v);
  }
}

Trajectory run_trajectory(const SystemConfig& config, const MarkSequence& marks,
                          const TrajectoryOptions& options) {
  if (marks.size() > options.max_stored_steps) {
    throw DomainError("horizon " + std::to_string(marks.size()) +
                      " exceeds the stored-trajectory cap of " +
                      std::to_string(options.max_stored_steps) + " steps");
  }
  Trajectory t{{}, config, id_of(marks)};
  t.profiles.reserve(marks.size() + 1);
  for_each_profile(config, marks.marks(),
                   [&](std::size_t, const SortedProfile& p) { t.profiles.push_back(p); });
  return t;
}

ComparisonReport verify_theorem1(std::size_t servers, std::size_t smaller,
                                 const MarkSequence& marks, const VerifyOptions& options) {
  if (smaller < 1 || smaller > servers) {
    throw DomainError("theorem-1 comparison needs 1 <= N <= S, got N = " +
                      std::to_string(smaller) + ", S = " + std::to_string(servers));
  }
  const std::size_t offset = servers - smaller;
  const std::size_t rank = offset + 1;

  SortedProfile large = SortedProfile::zeros(servers);
  SortedProfile small = SortedProfile::zeros(smaller);
  RunningSummary large_summary("S" + std::to_string(servers) + "P1");
  RunningSummary small_summary("S" + std::to_string(smaller) + "P1");

  ComparisonReport report;
  report.marks_id = id_of(marks);

  auto check = [&](std::size_t step) -> std::optional<Violation> {
    const SortedProfile checked =
        options.corrupt_step == step ? inflate_top(large) : large;

    for (std::size_t l = 1; l <= smaller; ++l) {
      if (checked[offset + l - 1] > small[l - 1]) {
        return Violation{step, "offered_rank_" + std::to_string(l), checked[offset + l - 1],
                         small[l - 1]};
      }
    }
    const double total_large = total_workload(checked);
    const double total_small = total_workload(small);
    if (total_large > total_small + sum_tolerance(options.sum_slack, total_small)) {
      return Violation{step, "total", total_large, total_small};
    }
    const SortedProfile padded = pad(small, servers);
    return as_violation(step, prec_p(checked, padded, rank, 0.0,
                                     sum_tolerance(options.sum_slack, total_small)));
  };

  for (std::size_t n = 0;; ++n) {
    large_summary.add(large);
    small_summary.add(small);
    if (auto v = check(n)) report.violations.push_back(std::move(*v));
    ++report.steps_checked;
    if (n == marks.size()) break;
    large = kw_step(large, marks[n]);
    small = kw_step(small, marks[n]);
  }
  report.systems = {large_summary.result(), small_summary.result()};
  return report;
}

ComparisonReport verify_theorem2(std::size_t rank, const SortedProfile& v0,
                                 const SortedProfile& v0_tilde, const MarkSequence& marks,
                                 const VerifyOptions& options) {
  if (v0.size() != v0_tilde.size()) {
    throw DomainError("initial profiles have different lengths");
  }
  const std::size_t servers = v0.size();
  if (rank < 1 || rank > servers) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(servers) + "]");
  }
  if (const auto premise = prec_p(v0, v0_tilde, rank); !premise) {
    const auto& v = *premise.violation;
    throw PreconditionError("initial profiles violate V0 ≺_P Ṽ0: " + v.clause + " at " +
                            std::to_string(v.index) + " (" + format_number(v.lhs) + " > " +
                            format_number(v.rhs) + ")");
  }

  SortedProfile jsw = v0;
  SortedProfile other = v0_tilde;
  RunningSummary jsw_summary("S" + std::to_string(servers) + "P1");
  RunningSummary other_summary("S" + std::to_string(servers) + "P" + std::to_string(rank));

  ComparisonReport report;
  report.marks_id = id_of(marks);

  for (std::size_t n = 0;; ++n) {
    jsw_summary.add(jsw);
    other_summary.add(other);
    const SortedProfile checked = options.corrupt_step == n ? inflate_top(jsw) : jsw;
    const double tol = sum_tolerance(options.sum_slack, total_workload(other));
    if (auto v = as_violation(n, prec_p(checked, other, rank, 0.0, tol))) {
      report.violations.push_back(std::move(*v));
    }
    ++report.steps_checked;
    if (n == marks.size()) break;
    jsw = kw_step(jsw, marks[n]);
    other = pth_step(other, marks[n], rank);
  }
  report.systems = {jsw_summary.result(), other_summary.result()};
  return report;
}

std::vector<double> fcfs_oracle(std::span<const Mark> marks, std::size_t servers) {
  if (servers < 1) {
    throw DomainError("FCFS queue needs at least one server");
  }
  std::vector<double> free_at(servers, 0.0);
  std::vector<double> waits;
  waits.reserve(marks.size());
  double arrival = 0.0;
  for (const Mark& m : marks) {
    // min_element returns the first minimum: lowest server index on ties.
    const auto server = std::min_element(free_at.begin(), free_at.end());
    const double start = std::max(arrival, *server);
    waits.push_back(start - arrival);
    *server = start + m.sigma();
    arrival += m.xi();
  }
  return waits;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw DomainError("KS statistic needs nonempty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double m = static_cast<double>(sa.size());
  const double n = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double x = j == sb.size() || (i < sa.size() && sa[i] <= sb[j]) ? sa[i] : sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  return d;
}

EcdfDominance ecdf_dominance(std::span<const double> a, std::span<const double> b,
                             std::optional<double> slack) {
  if (a.empty() || b.empty()) {
    throw DomainError("ECDF dominance needs nonempty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double m = static_cast<double>(sa.size());
  const double n = static_cast<double>(sb.size());
  const double band = slack.value_or(1.36 * std::sqrt((m + n) / (m * n)));

  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t grid = 0;
  std::size_t violating = 0;
  double worst = 0.0;
  while (i < sa.size() || j < sb.size()) {
    const double x = j == sb.size() || (i < sa.size() && sa[i] <= sb[j]) ? sa[i] : sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    const double gap = static_cast<double>(j) / n - static_cast<double>(i) / m;
    ++grid;
    worst = std::max(worst, gap);
    if (gap > band) ++violating;
  }
  return EcdfDominance{violating == 0,
                       static_cast<double>(violating) / static_cast<double>(grid), worst, band};
}

void write_trajectory_header(std::ostream& out) { out << "step,system,coordinate,value\n"; }

void write_trajectory_rows(std::ostream& out, std::string_view system_id, std::size_t step,
                           const SortedProfile& profile) {
  CsvWriter csv(out);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    csv.field(std::uint64_t{step}).field(system_id).field(std::uint64_t{i + 1}).field(profile[i]);
    csv.end_row();
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  write_trajectory_header(out);
  const std::string id = trajectory.config.label();
  for (std::size_t k = 0; k < trajectory.profiles.size(); ++k) {
    write_trajectory_rows(out, id, k, trajectory.profiles[k]);
  }
}

void write_violations_header(std::ostream& out) { out << "seed,inequality,step,lhs,rhs\n"; }

void write_violations_csv(std::ostream& out, const ComparisonReport& report) {
  CsvWriter csv(out);
  for (const auto& v : report.violations) {
    csv.field(std::uint64_t{report.marks_id.seed})
        .field(std::string_view(v.inequality))
        .field(std::uint64_t{v.step})
        .field(v.lhs)
        .field(v.rhs);
    csv.end_row();
  }
}

}  // namespace parq
