// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "parq/comparison.hpp"
#include "parq/error.hpp"
#include "parq/lemma_suite.hpp"
#include "parq/loynes.hpp"
#include "parq/orderings.hpp"

namespace {

using namespace parq;

constexpr double kOracleTolerance = 1e-9;       // criterion 2
constexpr double kSumSlack = 1e-12;             // criteria 4, 5
constexpr std::size_t kLemmaInstances = 10'000;  // criterion 3, per lemma
constexpr double kClosedFormBand = 0.06;        // criterion 7, relative
constexpr std::size_t kClosedFormReplications = 100'000;

struct Verdict {
  bool pass;
  std::string detail;
};

std::vector<InputModel> mixed_models() {
  return {
      InputModel::iid(Law::parse("exp(1)"), Law::parse("exp(1)")),
      InputModel::iid(Law::parse("unif(0,2)"), Law::parse("exp(0.7)")),
      InputModel::iid(Law::parse("hyperexp(0.2:0.25,0.8:2)"), Law::parse("unif(0.25,1.25)")),
      InputModel(MarkovModel{{{0.9, 0.1}, {0.2, 0.8}},
                             {Law::parse("exp(0.5)"), Law::parse("det(0.25)")},
                             {Law::parse("exp(1)"), Law::parse("hyperexp(0.5:1,0.5:4)")}}),
  };
}

Verdict kw_step_correctness() {
  std::size_t failures = 0;
  const auto expect = [&](const SortedProfile& got, const SortedProfile& want) {
    failures += got == want ? 0 : 1;
  };
  expect(kw_step(SortedProfile({0, 0}), Mark(1, 0.4)), SortedProfile({0, 0.6}));
  expect(kw_step(SortedProfile({0, 0.6}), Mark(1, 0.4)),
         sort_ascending(std::vector<double>{(0.0 + 1) - 0.4, 0.6 - 0.4}));
  expect(kw_step(SortedProfile({0, 0}), Mark(3, 1)), SortedProfile({0, 2}));
  expect(kw_step(SortedProfile({0, 2}), Mark(3, 1)), SortedProfile({1, 2}));
  expect(kw_step(SortedProfile({2}), Mark(3, 1)), SortedProfile({4}));
  expect(kw_step(SortedProfile({0, 2, 2}), Mark(1, 0.5)), SortedProfile({0.5, 1.5, 1.5}));
  expect(pth_step(SortedProfile({1, 1, 3}), Mark(1, 0.5), 3), SortedProfile({0.5, 0.5, 3.5}));
  expect(pth_step(SortedProfile({0, 2, 2}), Mark(1, 0.5), 3), SortedProfile({0, 1.5, 2.5}));
  expect(pth_step(SortedProfile({1, 1, 3}), Mark(1, 0.5), 1), SortedProfile({0.5, 1.5, 2.5}));

  std::mt19937_64 rng(1);
  std::exponential_distribution<double> work(0.5);
  std::size_t mismatches = 0;
  constexpr std::size_t kRandom = 100'000;
  for (std::size_t i = 0; i < kRandom; ++i) {
    const std::size_t servers = 1 + rng() % 10;
    std::vector<double> v(servers);
    for (double& x : v) x = rng() % 4 == 0 ? 0.0 : work(rng);
    const SortedProfile u = sort_ascending(v);
    const Mark m(work(rng), work(rng) + 1e-3);
    mismatches += pth_step(u, m, 1) == kw_step(u, m) ? 0 : 1;
  }
  return {failures == 0 && mismatches == 0,
          std::to_string(failures) + " worked-example mismatches, " + std::to_string(mismatches) +
              " of " + std::to_string(kRandom) + " random rank-1 mismatches"};
}

Verdict fcfs_equivalence() {
  const auto models = mixed_models();
  double worst = 0.0;
  std::size_t runs = 0;
  for (std::size_t servers : {1u, 2u, 3u, 5u, 8u}) {
    for (const auto& model : models) {
      for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const MarkSequence marks = generate(model, seed, 1000);
        const auto waits = fcfs_oracle(marks.marks(), servers);
        for_each_profile(SystemConfig::jsw(servers), marks.marks(),
                         [&](std::size_t k, const SortedProfile& p) {
                           if (k < waits.size()) {
                             worst = std::max(worst, std::abs(waits[k] - offered_wait(p)));
                           }
                         });
        ++runs;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |W_k - V_k(1)| = %.3g over %zu runs (tolerance %.0e)",
                worst, runs, kOracleTolerance);
  return {worst <= kOracleTolerance, buf};
}

Verdict lemma_suites() {
  LemmaSuiteOptions options;
  options.instances = kLemmaInstances;
  options.min_dim = 1;
  options.max_dim = 8;
  std::size_t counterexamples = 0;
  std::size_t smallest = SIZE_MAX;
  std::string names;
  for (const auto& o : run_lemma_suites(options)) {
    counterexamples += o.counterexamples;
    smallest = std::min(smallest, o.instances);
    names += (names.empty() ? "" : " ") + o.lemma + "=" + std::to_string(o.counterexamples);
  }
  return {counterexamples == 0 && smallest >= kLemmaInstances,
          std::to_string(counterexamples) + " counterexamples, >= " + std::to_string(smallest) +
              " instances per lemma [" + names + "]"};
}

Verdict theorem1_pathwise() {
  const auto models = mixed_models();
  VerifyOptions options;
  options.sum_slack = kSumSlack;
  std::size_t violations = 0;
  std::size_t steps = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const std::size_t horizon = 500 + (seed * 2654435761u) % 4501;
    const MarkSequence marks = generate(models[seed % models.size()], seed, horizon);
    for (auto [s, n] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 2}, {5, 2}, {8, 3}}) {
      const ComparisonReport r = verify_theorem1(s, n, marks, options);
      steps += r.steps_checked;
      violations += r.violations.size();
      if (!r.violations.empty() && first.empty()) {
        first = "; first: seed " + std::to_string(seed) + " " + r.violations[0].inequality;
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over " +
                               std::to_string(steps) + " checked steps, 1000 seeds" + first};
}

Verdict theorem2_pathwise() {
  const auto models = mixed_models();
  VerifyOptions options;
  options.sum_slack = kSumSlack;
  // Starts live on a 1/64 grid so the premise construction is exact.
  std::mt19937_64 rng(2);
  const auto grid = [&](int max_units) {
    return static_cast<double>(rng() % static_cast<std::uint64_t>(max_units + 1)) / 64.0;
  };
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::size_t rejected = 0;
  for (std::uint64_t seed = 1; instances < 1000; ++seed) {
    const std::size_t servers = 1 + rng() % 8;
    const std::size_t rank = 1 + rng() % servers;
    std::vector<double> v(servers);
    for (double& x : v) x = grid(256);
    std::sort(v.begin(), v.end());
    std::vector<double> w = v;
    for (double& x : w) x += rng() % 2 ? 0.0 : grid(64);
    std::sort(w.begin(), w.end());
    // Shift mass from a coordinate below the rank to a higher one; this
    // raises tail sums and leaves coordinates >= rank no lower.
    if (servers > 1 && rank > 1) {
      const std::size_t i = rng() % (rank - 1);
      const std::size_t j = i + 1 + rng() % (servers - i - 1);
      const double room = i == 0 ? w[0] : w[i] - w[i - 1];
      const double delta = room * grid(64);
      w[i] -= delta;
      w[j] += delta;
    }
    const SortedProfile v0 = sort_ascending(v);
    const SortedProfile v0_tilde = sort_ascending(w);
    if (!prec_p(v0, v0_tilde, rank)) {
      ++rejected;
      continue;
    }
    ++instances;
    const MarkSequence marks = generate(models[seed % models.size()], seed, 500);
    violations += verify_theorem2(rank, v0, v0_tilde, marks, options).violations.size();
  }
  return {violations == 0, std::to_string(violations) + " violations over " +
                               std::to_string(instances) + " premise-satisfying starts (" +
                               std::to_string(rejected) + " draws rejected by the premise check)"};
}

Verdict loynes_monotonicity() {
  std::vector<std::size_t> checked_n;
  for (std::size_t n = 0; n < 256; ++n) checked_n.push_back(n);
  for (double x = 256; x < 10'000; x *= 1.15) checked_n.push_back(static_cast<std::size_t>(x));
  checked_n.push_back(9'999);

  std::size_t failures = 0;
  std::size_t pairs = 0;
  for (std::size_t servers : {1u, 2u, 4u}) {
    const auto model =
        InputModel::iid(Law::parse("exp(1)"), Law(Exponential{0.9 * static_cast<double>(servers)}));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const MarkSequence stream = generate(model, seed, 10'000);
      for (std::size_t n : checked_n) {
        failures += prec(loynes_backward(stream, n, servers),
                         loynes_backward(stream, n + 1, servers))
                        ? 0
                        : 1;
        ++pairs;
      }
    }
  }
  return {failures == 0, std::to_string(failures) + " of " + std::to_string(pairs) +
                             " (n, n+1) pairs out of order, n <= 10^4, S in {1,2,4}, 100 seeds"};
}

struct Replicated {
  double mean;
  double standard_error;
  std::size_t unconverged;
};

Replicated replicate(const InputModel& model, std::size_t servers, std::size_t reps) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t unconverged = 0;
  for (std::uint64_t seed = 1; seed <= reps; ++seed) {
    const LoynesResult r = estimate_stationary(model, seed, servers, 1);
    unconverged += r.converged ? 0 : 1;
    const double w = offered_wait(r.profile);
    sum += w;
    sum_sq += w * w;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / (n - 1)), unconverged};
}

Verdict closed_form() {
  struct Case {
    const char* name;
    InputModel model;
    std::size_t servers;
    double lambda;
  };
  const std::vector<Case> cases{
      {"M/M/1 load 0.5", InputModel::iid(Law::parse("exp(1)"), Law::parse("exp(0.5)")), 1, 0.5},
      {"M/M/2 load 1", InputModel::iid(Law::parse("exp(1)"), Law::parse("exp(1)")), 2, 1.0},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const double exact = oracle::erlang_c_mean_wait(c.servers, c.lambda, 1.0);
    const Replicated r = replicate(c.model, c.servers, kClosedFormReplications);
    const double rel = std::abs(r.mean - exact) / exact;
    const bool ok = rel <= kClosedFormBand && r.unconverged == 0;
    pass = pass && ok;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s%s: %.4f vs %.4f (rel err %.2f%%, MC 95%% band +-%.2f%%, required +-%.0f%%, "
                  "%zu reps, %zu unconverged)",
                  detail.empty() ? "" : "; ", c.name, r.mean, exact, 100 * rel,
                  100 * 1.96 * r.standard_error / exact, 100 * kClosedFormBand,
                  kClosedFormReplications, r.unconverged);
    detail += buf;
  }
  return {pass, detail};
}

Verdict padding_identity() {
  const std::size_t servers = 4;
  const auto model = InputModel::iid(Law::parse("exp(1)"), Law::parse("exp(1)"));
  std::size_t mismatches = 0;
  std::size_t steps = 0;
  for (std::size_t rank : {2u, 3u}) {
    const std::size_t effective = servers - rank + 1;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const MarkSequence marks = generate(model, seed, 4096);
      std::vector<SortedProfile> small;
      for_each_profile(SystemConfig::jsw(effective), marks.marks(),
                       [&](std::size_t, const SortedProfile& p) { small.push_back(p); });
      for_each_profile(SystemConfig{servers, rank, SortedProfile::zeros(servers)}, marks.marks(),
                       [&](std::size_t k, const SortedProfile& p) {
                         mismatches += p == pad(small[k], servers) ? 0 : 1;
                         ++steps;
                       });
      const LoynesResult big = estimate_stationary(model, seed, servers, rank);
      const LoynesResult reduced = estimate_stationary(model, seed, effective, 1);
      mismatches += big.profile == pad(reduced.profile, servers) ? 0 : 1;
      ++steps;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over " +
                               std::to_string(steps) + " steps and estimates, P in {2,3}, 50 seeds"};
}

Verdict stability_dichotomy() {
  const std::size_t servers = 2;
  const auto stable = InputModel::iid(Law::parse("exp(1)"), Law::parse("exp(1)"));
  std::size_t converged = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    converged += estimate_stationary(stable, seed, servers, 1).converged ? 1 : 0;
  }

  // E[sigma] = 3, S E[xi] = 2.
  const auto unstable = InputModel::iid(Law::parse("exp(0.3333333333333333)"), Law::parse("exp(1)"));
  const double drift = mean_sigma(unstable).value - servers * mean_xi(unstable).value;
  constexpr std::size_t n = 100'000;
  std::size_t above = 0;
  double slowest = INFINITY;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const MarkSequence stream = generate(unstable, seed, n);
    const double slope = total_workload(loynes_backward(stream, n, servers)) / n;
    slowest = std::min(slowest, slope);
    above += slope > drift / 2 ? 1 : 0;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "stable: %zu/50 converged; unstable: %zu/50 with total/n > %.3f (min %.3f)",
                converged, above, drift / 2, slowest);
  return {converged == 50 && above == 50, buf};
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "parq_acceptance";
  std::filesystem::create_directories(dir);

  const auto run = [&](std::vector<std::string> args, const std::string& out_name) {
    const std::string out = (dir / out_name).string();
    args.insert(args.begin(), "parq");
    args.insert(args.end(), {"--out", out});
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    std::ifstream in(out, std::ios::binary);
    std::string body{std::istreambuf_iterator<char>(in), {}};
    return std::to_string(code) + "\n" + body;
  };

  struct Command {
    std::vector<std::string> args;
    int expected_code;
  };
  const std::vector<Command> commands{
      {{"simulate", "--set", "system.servers=3", "--seed", "1..5", "--horizon", "2000", "--jobs",
        "2"},
       cli::kPass},
      {{"simulate", "--set", "model.kind=markov", "--set", "model.transition=0.5,0.5;0.1,0.9",
        "--set", "model.sigma=exp(1);det(0.5)", "--set", "model.xi=exp(2);unif(0.5,1)", "--set",
        "simulate.format=long", "--horizon", "500"},
       cli::kPass},
      {{"loynes", "--set", "system.servers=2", "--seed", "1..50", "--jobs", "3"}, cli::kPass},
      {{"compare", "--set", "system.servers=5", "--set", "compare.smaller=2", "--set",
        "compare.corrupt_step=7", "--seed", "1..20", "--horizon", "500"},
       cli::kViolation},
  };
  std::size_t differing = 0;
  std::size_t unexpected = 0;
  std::size_t bytes = 0;
  std::size_t index = 0;
  for (const auto& c : commands) {
    const std::string name = "run" + std::to_string(index++);
    const std::string first = run(c.args, name + "_a.csv");
    const std::string second = run(c.args, name + "_b.csv");
    differing += first == second ? 0 : 1;
    const std::string code = std::to_string(c.expected_code) + "\n";
    unexpected += first.rfind(code, 0) == 0 && first.size() > code.size() ? 0 : 1;
    bytes += first.size();
  }
  std::filesystem::remove_all(dir);
  return {differing == 0 && unexpected == 0,
          std::to_string(differing) + " of " + std::to_string(commands.size()) +
              " command reruns differ in exit code or CSV bytes, " + std::to_string(unexpected) +
              " with an unexpected exit code or empty CSV, " + std::to_string(bytes) +
              " bytes compared"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"kw_step / pth_step correctness", kw_step_correctness},
      {"JSW equals FCFS oracle", fcfs_equivalence},
      {"ordering lemma suites", lemma_suites},
      {"Theorem 1 pathwise", theorem1_pathwise},
      {"Theorem 2 pathwise", theorem2_pathwise},
      {"Loynes monotonicity", loynes_monotonicity},
      {"stationary closed forms", closed_form},
      {"P-padding identity", padding_identity},
      {"stability dichotomy", stability_dichotomy},
      {"determinism", determinism},
  };

  std::size_t failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += v.pass ? 0 : 1;
    std::printf("[%s] %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
