#include "parq/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "parq/error.hpp"

namespace parq {
namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DomainError("vector lengths differ: " + std::to_string(a) + " vs " +
                      std::to_string(b));
  }
}

// Backward accumulation; checks every k in [first_k, S] (1-based).
OrderVerdict tail_sums_dominated(std::span<const double> u, std::span<const double> v,
                                 std::size_t first_k, double tol) {
  const std::size_t n = u.size();
  std::vector<double> tu(n + 1, 0.0);
  std::vector<double> tv(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    tu[i] = tu[i + 1] + u[i];
    tv[i] = tv[i + 1] + v[i];
  }
  // First violation in increasing k.
  for (std::size_t k = first_k; k <= n; ++k) {
    if (tu[k - 1] > tv[k - 1] + tol) {
      return {OrderVerdict::Violation{"tail_sum", k, tu[k - 1], tv[k - 1]}};
    }
  }
  return {};
}

OrderVerdict coords_dominated(std::span<const double> u, std::span<const double> v,
                              std::size_t first, double tol) {
  for (std::size_t i = first; i <= u.size(); ++i) {
    if (u[i - 1] > v[i - 1] + tol) {
      return {OrderVerdict::Violation{"coord", i, u[i - 1], v[i - 1]}};
    }
  }
  return {};
}

std::vector<double> negated(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), std::negate<>{});
  return out;
}

}  // namespace

OrderVerdict prec(const SortedProfile& u, const SortedProfile& v, double tol) {
  require_same_length(u.size(), v.size());
  return coords_dominated(u.values(), v.values(), 1, tol);
}

OrderVerdict prec_star(const SortedProfile& u, const SortedProfile& v, double tol) {
  require_same_length(u.size(), v.size());
  return tail_sums_dominated(u.values(), v.values(), 1, tol);
}

OrderVerdict prec_p(const SortedProfile& u, const SortedProfile& v, std::size_t rank,
                    double tol) {
  return prec_p(u, v, rank, tol, tol);
}

OrderVerdict prec_p(const SortedProfile& u, const SortedProfile& v, std::size_t rank,
                    double coord_tol, double sum_tol) {
  require_same_length(u.size(), v.size());
  if (rank < 1 || rank > u.size()) {
    throw DomainError("rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(u.size()) + "]");
  }
  if (auto star = tail_sums_dominated(u.values(), v.values(), 1, sum_tol); !star) {
    return star;
  }
  return coords_dominated(u.values(), v.values(), rank, coord_tol);
}

OrderVerdict schur_convex_leq(std::span<const double> u, std::span<const double> v,
                              double tol) {
  require_same_length(u.size(), v.size());
  if (u.empty()) {
    return {};
  }
  const std::vector<double> su = sorted_copy(u);
  const std::vector<double> sv = sorted_copy(v);
  double total_u = 0.0;
  double total_v = 0.0;
  for (std::size_t i = su.size(); i-- > 0;) {
    total_u += su[i];
    total_v += sv[i];
  }
  if (std::abs(total_u - total_v) > tol) {
    return {OrderVerdict::Violation{"total", 1, total_u, total_v}};
  }
  return tail_sums_dominated(su, sv, 2, tol);
}

bool check_lemma_negation(std::span<const double> u, std::span<const double> v,
                          double tol) {
  const bool forward = schur_convex_leq(u, v, tol).holds();
  const bool mirrored = schur_convex_leq(negated(u), negated(v), tol).holds();
  return forward == mirrored;
}

bool check_lemma_shift(const SortedProfile& u, const SortedProfile& v, double x, double y,
                       double tol) {
  require_same_length(u.size(), v.size());
  if (x > y) {
    throw PreconditionError("shift lemma requires x <= y");
  }
  if (u[0] + x < 0.0 || v[0] + y < 0.0) {
    throw PreconditionError("shift would make a workload negative");
  }
  if (!prec(u, v, tol)) {
    return true;
  }
  std::vector<double> us(u.begin(), u.end());
  std::vector<double> vs(v.begin(), v.end());
  us[0] += x;
  vs[0] += y;
  return prec(sort_ascending(us), sort_ascending(vs), tol).holds();
}

bool check_lemma_shift_reverse(const SortedProfile& u, const SortedProfile& v, double x,
                               double tol) {
  require_same_length(u.size(), v.size());
  if (u[0] + x < 0.0 || v[0] + x < 0.0) {
    throw PreconditionError("shift would make a workload negative");
  }
  std::vector<double> us(u.begin(), u.end());
  std::vector<double> vs(v.begin(), v.end());
  us[0] += x;
  vs[0] += x;
  if (!prec(sort_ascending(us), sort_ascending(vs), tol)) {
    return true;
  }
  return prec(u, v, tol).holds();
}

bool convex_symmetric_battery(std::span<const double> u, std::span<const double> v,
                              double tol) {
  if (!schur_convex_leq(u, v, tol)) {
    throw PreconditionError("convex battery requires u majorized by v");
  }
  if (u.empty()) {
    return true;
  }

  using Fn = std::function<double(std::span<const double>)>;
  std::vector<Fn> battery;
  battery.emplace_back([](std::span<const double> x) { return *std::max_element(x.begin(), x.end()); });
  battery.emplace_back([](std::span<const double> x) {
    return -*std::min_element(x.begin(), x.end());
  });
  battery.emplace_back([](std::span<const double> x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    return s;
  });
  battery.emplace_back([](std::span<const double> x) {
    double s = 0.0;
    for (double e : x) s += std::abs(e);
    return s;
  });
  battery.emplace_back([](std::span<const double> x) {
    const double m = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double e : x) s += std::exp(e - m);
    return m + std::log(s);
  });

  // Hinge functions at the breakpoints of both vectors plus a few fixed ones.
  std::vector<double> thresholds{-1.0, 0.0, 1.0};
  thresholds.insert(thresholds.end(), u.begin(), u.end());
  thresholds.insert(thresholds.end(), v.begin(), v.end());
  for (double c : thresholds) {
    battery.emplace_back([c](std::span<const double> x) {
      double s = 0.0;
      for (double e : x) s += std::max(e - c, 0.0);
      return s;
    });
  }

  for (const auto& f : battery) {
    const double fu = f(u);
    const double fv = f(v);
    if (fu > fv + tol * (1.0 + std::abs(fv))) {
      return false;
    }
  }
  return true;
}

bool check_lemma_sorted_diff(std::span<const double> u, std::span<const double> v,
                             double tol) {
  require_same_length(u.size(), v.size());
  const std::vector<double> su = sorted_copy(u);
  const std::vector<double> sv = sorted_copy(v);
  std::vector<double> lhs(u.size());
  std::vector<double> rhs(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    lhs[i] = su[i] - sv[i];
    rhs[i] = u[i] - sv[i];
  }
  return schur_convex_leq(lhs, rhs, tol).holds();
}

bool check_lemma_star_stability(const SortedProfile& u, const SortedProfile& v, double x,
                                std::size_t j, double y, double tol) {
  if (!prec_star(u, v, tol)) {
    throw PreconditionError("star stability requires u ≺_* v");
  }
  if (j < 1 || j > u.size()) {
    throw DomainError("index j outside [1, S]");
  }
  if (u[j - 1] > v[j - 1]) {
    throw PreconditionError("star stability requires u(j) <= v(j)");
  }
  if (!(y >= 0.0)) {
    throw PreconditionError("star stability requires y >= 0");
  }

  std::vector<double> us(u.begin(), u.end());
  std::vector<double> vs(v.begin(), v.end());
  for (double& e : us) e = std::max(e - x, 0.0);
  for (double& e : vs) e = std::max(e - x, 0.0);
  const bool drained = prec_star(SortedProfile(us), SortedProfile(vs), tol).holds();

  us.assign(u.begin(), u.end());
  vs.assign(v.begin(), v.end());
  us[j - 1] += y;
  vs[j - 1] += y;
  const bool loaded = prec_star(sort_ascending(us), sort_ascending(vs), tol).holds();

  return drained && loaded;
}

MapComparison check_lemma_map_comparison(const SortedProfile& u, const SortedProfile& v,
                                         const Mark& m, std::size_t rank, double tol) {
  if (!prec_p(u, v, rank, tol)) {
    throw PreconditionError("map comparison requires u ≺_P v");
  }
  const SortedProfile rank_v = pth_step(v, m, rank);
  return MapComparison{
      prec_p(kw_step(u, m), rank_v, rank, tol).holds(),
      prec_p(pth_step(u, m, rank), rank_v, rank, tol).holds(),
  };
}

}  // namespace parq
