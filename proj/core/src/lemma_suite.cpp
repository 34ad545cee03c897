#include "parq/lemma_suite.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "parq/csv.hpp"
#include "parq/error.hpp"
#include "parq/orderings.hpp"
#include "parq/profile.hpp"
#include "parq/rng.hpp"

namespace parq {
namespace {

class InstanceSampler {
 public:
  InstanceSampler(std::uint64_t seed, std::size_t min_dim, std::size_t max_dim)
      : rng_(seed), min_dim_(min_dim), max_dim_(max_dim) {}

  // Alternate between exact dyadic instances and continuous ones.
  void next_instance(std::size_t i) { dyadic_ = (i % 2 == 0); }
  bool dyadic() const noexcept { return dyadic_; }

  std::size_t dim() { return min_dim_ + index(max_dim_ - min_dim_ + 1); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return (rng_() & 1U) != 0; }

  // Value in [lo, hi]; a multiple of 1/8 in dyadic mode.
  double value(double lo, double hi) {
    if (dyadic_) {
      const auto steps = static_cast<std::uint64_t>((hi - lo) * 8.0);
      return lo + static_cast<double>(rng_() % (steps + 1)) / 8.0;
    }
    return lo + (hi - lo) * rng_.uniform();
  }

  std::vector<double> vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = value(lo, hi);
    return v;
  }

  SortedProfile profile(std::size_t n) { return sort_ascending(vector(n, 0.0, 5.0)); }

  // u ≺_c v by T-transforms of v (at most two so dyadic arithmetic is exact).
  std::vector<double> majorized_by(const std::vector<double>& v) {
    std::vector<double> u = v;
    if (u.size() < 2) return u;
    const std::size_t transforms = index(3);
    for (std::size_t t = 0; t < transforms; ++t) {
      const std::size_t i = index(u.size());
      std::size_t j = index(u.size() - 1);
      if (j >= i) ++j;
      const double lambda = static_cast<double>(index(9)) / 8.0;
      const double a = u[i];
      const double b = u[j];
      u[i] = lambda * a + (1.0 - lambda) * b;
      u[j] = (1.0 - lambda) * a + lambda * b;
    }
    // Shuffle: ≺_c is permutation invariant.
    for (std::size_t k = u.size(); k > 1; --k) std::swap(u[k - 1], u[index(k)]);
    return u;
  }

  // v with u ≺_* v: add mass anywhere, move mass to higher coordinates,
  // then sort (sorting can only raise tail sums).
  SortedProfile star_dominating(const SortedProfile& u) {
    std::vector<double> w(u.begin(), u.end());
    const std::size_t ops = index(4);
    for (std::size_t t = 0; t < ops; ++t) {
      const std::size_t i = index(w.size());
      if (coin() || i + 1 == w.size()) {
        w[i] += value(0.0, 2.0);
      } else {
        const std::size_t j = i + 1 + index(w.size() - i - 1);
        const double delta = std::min(w[i], value(0.0, 2.0));
        w[i] -= delta;
        w[j] += delta;
      }
    }
    return sort_ascending(w);
  }

  // v with u ≺_P v: a ≺_* dominating vector raised to u on [rank, S].
  SortedProfile p_dominating(const SortedProfile& u, std::size_t rank) {
    const SortedProfile star = star_dominating(u);
    std::vector<double> v(star.begin(), star.end());
    for (std::size_t l = rank; l <= v.size(); ++l) v[l - 1] = std::max(v[l - 1], u[l - 1]);
    return SortedProfile(std::move(v));
  }

 private:
  Xoshiro256 rng_;
  std::size_t min_dim_;
  std::size_t max_dim_;
  bool dyadic_ = true;
};

std::string show(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s + ")";
}

std::string show(const SortedProfile& p) { return show(p.values()); }

class Recorder {
 public:
  Recorder(std::string name, std::size_t max_reported) : max_reported_(max_reported) {
    outcome_.lemma = std::move(name);
  }

  void record(bool holds, const std::function<std::string()>& describe) {
    ++outcome_.instances;
    if (holds) return;
    ++outcome_.counterexamples;
    if (outcome_.reported.size() < max_reported_) outcome_.reported.push_back(describe());
  }

  LemmaOutcome result() const { return outcome_; }

 private:
  LemmaOutcome outcome_;
  std::size_t max_reported_;
};

// Each suite uses its own stream derived from the seed, so suites are
// independent of each other's draw counts.
std::uint64_t suite_seed(std::uint64_t seed, std::uint64_t suite) {
  std::uint64_t x = seed ^ (suite * 0x9e3779b97f4a7c15ULL);
  return Xoshiro256::splitmix64(x);
}

}  // namespace

std::vector<LemmaOutcome> run_lemma_suites(const LemmaSuiteOptions& options) {
  if (options.min_dim < 1 || options.max_dim < options.min_dim) {
    throw ConfigError("lemma suites need 1 <= min_dim <= max_dim");
  }
  std::vector<LemmaOutcome> outcomes;
  auto sampler_for = [&](std::uint64_t suite) {
    return InstanceSampler(suite_seed(options.seed, suite), options.min_dim, options.max_dim);
  };
  auto tol_for = [&](const InstanceSampler& s) { return s.dyadic() ? 0.0 : options.tolerance; };

  {
    Recorder rec("negation_symmetry", options.max_reported);
    auto s = sampler_for(1);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const auto v = s.vector(s.dim(), -5.0, 5.0);
      const auto u = s.majorized_by(v);
      const double tol = tol_for(s);
      const bool premise = schur_convex_leq(u, v, tol).holds();
      rec.record(premise && check_lemma_negation(u, v, tol),
                 [&] { return "u=" + show(u) + " v=" + show(v); });
    }
    outcomes.push_back(rec.result());
  }

  {
    Recorder rec("shift_monotonicity", options.max_reported);
    auto s = sampler_for(2);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const std::size_t n = s.dim();
      const SortedProfile u = s.profile(n);
      std::vector<double> raised(u.begin(), u.end());
      for (double& e : raised) {
        if (s.coin()) e += s.value(0.0, 2.0);
      }
      const SortedProfile v = sort_ascending(raised);
      const double x = s.value(-u[0], 3.0);
      const double y = x + (s.coin() ? 0.0 : s.value(0.0, 2.0));
      const double tol = tol_for(s);
      rec.record(prec(u, v, tol).holds() && check_lemma_shift(u, v, x, y, tol), [&] {
        return "u=" + show(u) + " v=" + show(v) + " x=" + format_number(x) +
               " y=" + format_number(y);
      });
    }
    outcomes.push_back(rec.result());
  }

  {
    Recorder rec("convex_battery", options.max_reported);
    auto s = sampler_for(3);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const auto v = s.vector(s.dim(), -5.0, 5.0);
      const auto u = s.majorized_by(v);
      rec.record(convex_symmetric_battery(u, v, options.tolerance),
                 [&] { return "u=" + show(u) + " v=" + show(v); });
    }
    outcomes.push_back(rec.result());
  }

  {
    Recorder rec("sorted_difference", options.max_reported);
    auto s = sampler_for(4);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const std::size_t n = s.dim();
      const auto u = s.vector(n, -5.0, 5.0);
      const auto v = s.vector(n, -5.0, 5.0);
      rec.record(check_lemma_sorted_diff(u, v, tol_for(s)),
                 [&] { return "u=" + show(u) + " v=" + show(v); });
    }
    outcomes.push_back(rec.result());
  }

  {
    Recorder rec("star_stability", options.max_reported);
    auto s = sampler_for(5);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const SortedProfile u = s.profile(s.dim());
      const SortedProfile v = s.star_dominating(u);
      std::vector<std::size_t> admissible;
      for (std::size_t j = 1; j <= u.size(); ++j) {
        if (u[j - 1] <= v[j - 1]) admissible.push_back(j);
      }
      const std::size_t j = admissible[s.index(admissible.size())];
      const double x = s.value(-1.0, 6.0);
      const double y = s.coin() ? 0.0 : s.value(0.0, 3.0);
      const double tol = tol_for(s);
      rec.record(check_lemma_star_stability(u, v, x, j, y, tol), [&] {
        return "u=" + show(u) + " v=" + show(v) + " x=" + format_number(x) +
               " j=" + std::to_string(j) + " y=" + format_number(y);
      });
    }
    outcomes.push_back(rec.result());
  }

  {
    Recorder jsw_rec("jsw_vs_rank_map", options.max_reported);
    Recorder rank_rec("rank_map_monotone", options.max_reported);
    auto s = sampler_for(6);
    for (std::size_t i = 0; i < options.instances; ++i) {
      s.next_instance(i);
      const std::size_t n = s.dim();
      const std::size_t rank = 1 + s.index(n);
      const SortedProfile u = s.profile(n);
      const SortedProfile v = s.coin() ? u : s.p_dominating(u, rank);
      const Mark m(s.value(0.0, 5.0), s.value(0.125, 5.0));
      const auto verdict = check_lemma_map_comparison(u, v, m, rank, tol_for(s));
      auto describe = [&] {
        return "u=" + show(u) + " v=" + show(v) + " sigma=" + format_number(m.sigma()) +
               " xi=" + format_number(m.xi()) + " P=" + std::to_string(rank);
      };
      jsw_rec.record(verdict.jsw_vs_rank, describe);
      rank_rec.record(verdict.rank_vs_rank, describe);
    }
    outcomes.push_back(jsw_rec.result());
    outcomes.push_back(rank_rec.result());
  }

  return outcomes;
}

}  // namespace parq
