#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parq/lemma_suite.hpp"
#include "parq/loynes.hpp"
#include "parq/processes.hpp"

namespace parq::cli {

struct KeySpec {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

// Every recognised key, in documentation order.
const std::vector<KeySpec>& config_keys();

// Flat "section.key" -> value map. File syntax:
//   [section]
//   key = value      # comment
// Unknown keys are rejected by name.
class Settings {
 public:
  Settings();  // all defaults

  void load(std::istream& in, std::string_view source);
  void load_file(const std::string& path);
  // "section.key=value"
  void assign(std::string_view assignment);
  void set(std::string_view key, std::string value);

  const std::string& raw(std::string_view key) const;
  std::string text(std::string_view key) const { return raw(key); }
  double real(std::string_view key) const;
  std::size_t count(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  std::vector<double> reals(std::string_view key) const;
  std::vector<std::uint64_t> seeds(std::string_view key) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

enum class CompareMode { theorem1, theorem2 };

struct ExperimentConfig {
  InputModel model;
  std::vector<std::uint64_t> seeds;
  std::size_t horizon;
  std::size_t jobs;
  std::string out;

  std::size_t servers;
  std::size_t rank;
  std::optional<std::vector<double>> initial;

  std::string simulate_format;  // wide | long

  LoynesOptions loynes;
  std::string loynes_snapshots;

  CompareMode compare_mode;
  std::size_t compare_smaller;
  std::optional<std::vector<double>> compare_initial_tilde;
  std::optional<std::size_t> compare_corrupt_step;

  LemmaSuiteOptions lemmas;
};

// Throws ConfigError naming the offending key.
ExperimentConfig build_experiment(const Settings& settings);

InputModel build_model(const Settings& settings);

}  // namespace parq::cli
