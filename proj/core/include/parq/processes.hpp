#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "parq/profile.hpp"
#include "parq/rng.hpp"

namespace parq {

struct Exponential {
  double rate;
};
struct Deterministic {
  double value;
};
struct Uniform {
  double lo;
  double hi;
};
struct HyperExponential {
  std::vector<double> probabilities;
  std::vector<double> rates;
};

// Law of a nonnegative random variable. Text form, used by config files:
//   exp(rate)  det(value)  unif(lo,hi)  hyperexp(p1:rate1,p2:rate2,...)
class Law {
 public:
  using Variant = std::variant<Exponential, Deterministic, Uniform, HyperExponential>;

  Law(Variant v);  // NOLINT(google-explicit-constructor)

  static Law parse(std::string_view text);

  double mean() const noexcept;
  // True when P(X > 0) = 1, as required for inter-arrival gaps.
  bool strictly_positive() const noexcept;
  // Uniforms consumed per draw: exp 1, det 0, unif 1, hyperexp 1 + (k > 1).
  double sample(Xoshiro256& rng) const;

  std::string to_string() const;
  const Variant& variant() const noexcept { return law_; }

 private:
  Variant law_;
};

struct IidModel {
  Law sigma;
  Law xi;
};

// Marks driven by a finite irreducible Markov chain; state s uses
// (sigma[s], xi[s]).
struct MarkovModel {
  std::vector<std::vector<double>> transition;
  std::vector<Law> sigma;
  std::vector<Law> xi;
};

// One mark per line, "sigma xi", '#' starts a comment.
struct TraceModel {
  std::filesystem::path path;
};

// A stationary ergodic mark sequence specification. Construction validates
// parameters and throws ConfigError on violation.
class InputModel {
 public:
  using Variant = std::variant<IidModel, MarkovModel, TraceModel>;

  InputModel(Variant v);  // NOLINT(google-explicit-constructor)

  static InputModel iid(Law sigma, Law xi) { return InputModel(IidModel{std::move(sigma), std::move(xi)}); }

  const Variant& variant() const noexcept { return model_; }
  std::string_view kind() const noexcept;
  // Stable one-line description, used as part of report identifiers.
  std::string describe() const;

 private:
  Variant model_;
};

// Marks for customers C_0 ... C_{L-1}, plus the identity of what produced
// them. Immutable.
class MarkSequence {
 public:
  MarkSequence(std::vector<Mark> marks, std::uint64_t seed, std::string model_description)
      : marks_(std::move(marks)), seed_(seed), model_(std::move(model_description)) {}

  // Hand-written marks, e.g. in tests.
  static MarkSequence explicit_marks(std::vector<Mark> marks) {
    return MarkSequence(std::move(marks), 0, "explicit");
  }

  std::span<const Mark> marks() const noexcept { return marks_; }
  std::size_t size() const noexcept { return marks_.size(); }
  const Mark& operator[](std::size_t i) const noexcept { return marks_[i]; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& model() const noexcept { return model_; }
  static constexpr std::string_view rng_algorithm() noexcept { return Xoshiro256::kAlgorithm; }

 private:
  std::vector<Mark> marks_;
  std::uint64_t seed_;
  std::string model_;
};

// Deterministic in (model, seed, length); a shorter sequence is always a
// prefix of a longer one. Per customer the draws are sigma_n then xi_n (then
// the next chain state for Markov models) from a single stream.
MarkSequence generate(const InputModel& model, std::uint64_t seed, std::size_t length);

struct MeanValue {
  double value;
  bool estimate;  // empirical (trace) rather than analytic
};

MeanValue mean_sigma(const InputModel& model);
MeanValue mean_xi(const InputModel& model);

enum class Stability { stable, unstable, critical };

std::string_view to_string(Stability s) noexcept;

// E[sigma] vs servers * E[xi]; equality within 1e-12 relative is critical.
Stability stability_check(const InputModel& model, std::size_t servers);

// Stationary law of an irreducible transition matrix (power iteration on the
// lazy chain, so periodic chains converge too).
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

std::vector<Mark> read_trace(const std::filesystem::path& path);

}  // namespace parq
