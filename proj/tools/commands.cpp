#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "parallel.hpp"
#include "parq/comparison.hpp"
#include "parq/csv.hpp"
#include "parq/error.hpp"
#include "parq/lemma_suite.hpp"
#include "parq/loynes.hpp"

namespace parq::cli {
namespace {

SortedProfile initial_profile(const std::optional<std::vector<double>>& values,
                              std::size_t servers, std::string_view key) {
  if (!values) return SortedProfile::zeros(servers);
  try {
    return SortedProfile(*values);
  } catch (const DomainError& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw ConfigError("config key 'run.out': cannot open '" + path + "' for writing");
  }
  return file;
}

void write_file(const std::string& path, std::string_view body) {
  auto file = open_output(path);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::string profile_text(const SortedProfile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += format_number(p[i]);
  }
  return s + ")";
}

struct MeanAndError {
  double mean;
  double standard_error;
};

MeanAndError mean_and_error(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return {mean, xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

void print_header(std::ostream& out, std::string_view command, const ExperimentConfig& c) {
  out << command << ": model " << c.model.describe() << ", rng " << Xoshiro256::kAlgorithm
      << ", " << c.seeds.size() << " seed(s)\n";
}

}  // namespace

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const SystemConfig system{c.servers, c.rank, initial_profile(c.initial, c.servers, "system.initial")};
  system.validate();
  const bool wide = c.simulate_format == "wide";

  const auto bodies = parallel_map(c.seeds.size(), c.jobs, [&](std::size_t i) {
    const std::uint64_t seed = c.seeds[i];
    const MarkSequence marks = generate(c.model, seed, c.horizon);
    std::ostringstream body;
    const std::string system_id = "seed" + std::to_string(seed) + ":" + system.label();
    for_each_profile(system, marks.marks(), [&](std::size_t step, const SortedProfile& p) {
      if (wide) {
        CsvWriter csv(body);
        csv.field(seed).field(std::uint64_t{step}).field(offered_wait(p)).field(total_workload(p));
        csv.fields(p.values());
        csv.end_row();
      } else {
        write_trajectory_rows(body, system_id, step, p);
      }
    });
    return std::move(body).str();
  });

  std::ostringstream csv_header;
  if (wide) {
    csv_header << "seed,step,offered_wait,total_workload";
    for (std::size_t i = 1; i <= c.servers; ++i) csv_header << ",v" << i;
    csv_header << '\n';
  } else {
    write_trajectory_header(csv_header);
  }

  if (c.out.empty()) {
    out << csv_header.str();
    for (const auto& b : bodies) out << b;
  } else {
    auto file = open_output(c.out);
    file << csv_header.str();
    for (const auto& b : bodies) file << b;
    print_header(out, "simulate", c);
    out << "system " << system.label() << ", horizon " << c.horizon << ", "
        << (c.horizon + 1) * c.seeds.size() << " profiles written to " << c.out << '\n';
  }
  return kPass;
}

int cmd_loynes(const ExperimentConfig& c, std::ostream& out) {
  const std::size_t effective = c.servers - c.rank + 1;
  const Stability stability = stability_check(c.model, effective);
  if (stability != Stability::stable) {
    out << "loynes: refusing to run, model is " << to_string(stability) << " for "
        << effective << " effective server(s)\n"
        << "  E[sigma]          = " << format_number(mean_sigma(c.model).value) << '\n'
        << "  servers * E[xi]   = "
        << format_number(static_cast<double>(effective) * mean_xi(c.model).value) << '\n';
    return kUnstable;
  }

  struct SeedResult {
    LoynesResult result;
    std::string snapshots;
  };
  const bool want_snapshots = !c.loynes_snapshots.empty();
  const auto results = parallel_map(c.seeds.size(), c.jobs, [&](std::size_t i) {
    const std::uint64_t seed = c.seeds[i];
    std::ostringstream snaps;
    LoynesSnapshot hook;
    if (want_snapshots) {
      hook = [&](std::size_t n, const SortedProfile& m) {
        CsvWriter csv(snaps);
        for (std::size_t k = 0; k < m.size(); ++k) {
          csv.field(seed).field(std::uint64_t{n}).field(std::uint64_t{k + 1}).field(m[k]);
          csv.end_row();
        }
      };
    }
    auto r = estimate_stationary(c.model, seed, c.servers, c.rank, c.loynes, hook);
    return SeedResult{std::move(r), std::move(snaps).str()};
  });

  if (want_snapshots) {
    auto file = open_output(c.loynes_snapshots);
    file << "seed,n,coordinate,value\n";
    for (const auto& r : results) file << r.snapshots;
  }
  if (!c.out.empty()) {
    std::ostringstream body;
    body << "seed,steps_used,converged,last_increment,offered_wait,total_workload";
    for (std::size_t i = 1; i <= c.servers; ++i) body << ",v" << i;
    body << '\n';
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i].result;
      CsvWriter csv(body);
      csv.field(c.seeds[i])
          .field(std::uint64_t{r.steps_used})
          .field(std::string_view(r.converged ? "1" : "0"))
          .field(r.last_increment)
          .field(offered_wait(r.profile))
          .field(total_workload(r.profile))
          .fields(r.profile.values());
      csv.end_row();
    }
    write_file(c.out, body.str());
  }

  std::vector<double> waits;
  std::vector<double> totals;
  std::size_t converged = 0;
  for (const auto& r : results) {
    waits.push_back(offered_wait(r.result.profile));
    totals.push_back(total_workload(r.result.profile));
    converged += r.result.converged ? 1 : 0;
  }
  print_header(out, "loynes", c);
  out << "system S" << c.servers << "P" << c.rank << ", tolerance "
      << format_number(c.loynes.tolerance) << ", window " << c.loynes.window << ", max_n "
      << c.loynes.max_n << '\n';
  if (results.size() == 1) {
    const auto& r = results.front().result;
    out << "profile " << profile_text(r.profile) << '\n'
        << "steps used " << r.steps_used << ", last increment "
        << format_number(r.last_increment) << ", converged " << (r.converged ? "yes" : "no")
        << '\n';
  }
  const auto wait = mean_and_error(waits);
  const auto total = mean_and_error(totals);
  out << "replications " << results.size() << ", converged " << converged << '\n'
      << "mean offered wait " << format_number(wait.mean) << " (standard error "
      << format_number(wait.standard_error) << ")\n"
      << "mean total workload " << format_number(total.mean) << " (standard error "
      << format_number(total.standard_error) << ")\n";
  return converged == results.size() ? kPass : kNotConverged;
}

int cmd_compare(const ExperimentConfig& c, std::ostream& out) {
  VerifyOptions options;
  options.corrupt_step = c.compare_corrupt_step;

  std::optional<SortedProfile> v0;
  std::optional<SortedProfile> v0_tilde;
  if (c.compare_mode == CompareMode::theorem2) {
    v0 = initial_profile(c.initial, c.servers, "system.initial");
    v0_tilde = initial_profile(c.compare_initial_tilde, c.servers, "compare.initial_tilde");
  }

  const auto reports = parallel_map(c.seeds.size(), c.jobs, [&](std::size_t i) {
    const MarkSequence marks = generate(c.model, c.seeds[i], c.horizon);
    if (c.compare_mode == CompareMode::theorem1) {
      return verify_theorem1(c.servers, c.compare_smaller, marks, options);
    }
    return verify_theorem2(c.rank, *v0, *v0_tilde, marks, options);
  });

  std::size_t steps = 0;
  std::size_t violations = 0;
  for (const auto& r : reports) {
    steps += r.steps_checked;
    violations += r.violations.size();
  }

  if (!c.out.empty()) {
    std::ostringstream body;
    write_violations_header(body);
    for (const auto& r : reports) write_violations_csv(body, r);
    write_file(c.out, body.str());
  }

  print_header(out, "compare", c);
  if (c.compare_mode == CompareMode::theorem1) {
    out << "mode theorem1: JSW S=" << c.servers << " vs JSW N=" << c.compare_smaller
        << ", both from empty\n";
  } else {
    out << "mode theorem2: JSW vs rank " << c.rank << " on S=" << c.servers << ", V0 "
        << profile_text(*v0) << ", V0~ " << profile_text(*v0_tilde) << '\n';
  }
  out << "steps checked " << steps << ", violations " << violations << '\n';
  constexpr std::size_t kShown = 20;
  std::size_t shown = 0;
  for (const auto& r : reports) {
    for (const auto& v : r.violations) {
      if (shown == kShown) break;
      ++shown;
      out << "violation seed " << r.marks_id.seed << " step " << v.step << " " << v.inequality
          << ": " << format_number(v.lhs) << " > " << format_number(v.rhs) << '\n';
    }
  }
  return violations == 0 ? kPass : kViolation;
}

int cmd_verify_lemmas(const ExperimentConfig& c, std::ostream& out) {
  const auto per_seed = parallel_map(c.seeds.size(), c.jobs, [&](std::size_t i) {
    LemmaSuiteOptions options = c.lemmas;
    options.seed = c.seeds[i];
    return run_lemma_suites(options);
  });

  std::vector<LemmaOutcome> totals = per_seed.front();
  for (auto& t : totals) t.reported.clear();
  for (std::size_t s = 0; s < per_seed.size(); ++s) {
    for (std::size_t l = 0; l < totals.size(); ++l) {
      if (s > 0) {
        totals[l].instances += per_seed[s][l].instances;
        totals[l].counterexamples += per_seed[s][l].counterexamples;
      }
      for (const auto& text : per_seed[s][l].reported) {
        totals[l].reported.push_back("seed " + std::to_string(c.seeds[s]) + ": " + text);
      }
    }
  }

  out << "verify-lemmas: " << c.seeds.size() << " seed(s), dimensions [" << c.lemmas.min_dim
      << ", " << c.lemmas.max_dim << "], " << c.lemmas.instances << " instances per lemma\n";
  std::size_t failures = 0;
  for (const auto& t : totals) {
    out << t.lemma << " instances " << t.instances << " counterexamples " << t.counterexamples
        << '\n';
    failures += t.counterexamples;
  }
  for (const auto& t : totals) {
    for (const auto& text : t.reported) out << "counterexample " << t.lemma << " " << text << '\n';
  }
  return failures == 0 ? kPass : kViolation;
}

int run_command(std::string_view name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err) {
  try {
    if (name == "simulate") return cmd_simulate(config, out);
    if (name == "loynes") return cmd_loynes(config, out);
    if (name == "compare") return cmd_compare(config, out);
    if (name == "verify-lemmas") return cmd_verify_lemmas(config, out);
    err << "unknown command '" << name << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const InstabilityError& e) {
    err << "unstable: " << e.what() << '\n';
    return kUnstable;
  } catch (const PreconditionError& e) {
    err << "premise failed: " << e.what() << '\n';
    return kPremiseFailed;
  }
}

namespace {

std::string keys_table() {
  std::ostringstream s;
  s << "Config keys (file sections [model], [run], ...; override with --set key=value):\n";
  for (const auto& k : config_keys()) {
    s << "  " << k.name << " = " << (k.default_value.empty() ? "\"\"" : k.default_value)
      << "\n      " << k.help << '\n';
  }
  s << "Environment: PARQ_CONFIG names the config file used when --config is absent.\n"
    << "Exit codes: 0 pass, 1 violation/counterexample, 2 config, 3 input, "
       "4 instability, 5 non-convergence, 6 premise failure.\n";
  return s.str();
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"parq: simulation and pathwise verification for parallel queues"};
  app.require_subcommand(1);
  app.footer(keys_table());

  std::string config_path;
  std::string seeds;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> jobs;
  std::optional<std::string> output;
  std::vector<std::string> assignments;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Run the workload-profile recursion and write per-step profiles"},
      {"loynes", "Estimate the minimal stationary profile by Loynes's backward scheme"},
      {"compare", "Run coupled systems and check the pathwise comparison inequalities"},
      {"verify-lemmas", "Run the randomized ordering-lemma property suites"},
      {"keys", "List every config key with its default"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    if (name == "keys") continue;
    sub->add_option("--config", config_path, "Config file (default: $PARQ_CONFIG)");
    sub->add_option("--seed", seeds, "Seed list, overrides run.seeds (e.g. 1..100)");
    sub->add_option("--horizon", horizon, "Overrides run.horizon");
    sub->add_option("--jobs", jobs, "Overrides run.jobs");
    sub->add_option("--out", output, "Overrides run.out");
    sub->add_option("--set", assignments, "Override any key: section.key=value");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kPass : kConfigError;
  }

  const auto* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "keys") {
    out << keys_table();
    return kPass;
  }

  try {
    Settings settings;
    if (config_path.empty()) {
      if (const char* env = std::getenv("PARQ_CONFIG"); env != nullptr && *env != '\0') {
        config_path = env;
      }
    }
    if (!config_path.empty()) settings.load_file(config_path);
    for (const auto& a : assignments) settings.assign(a);
    if (!seeds.empty()) settings.set("run.seeds", seeds);
    if (horizon) settings.set("run.horizon", std::to_string(*horizon));
    if (jobs) settings.set("run.jobs", std::to_string(*jobs));
    if (output) settings.set("run.out", *output);
    return run_command(chosen->get_name(), build_experiment(settings), out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace parq::cli
