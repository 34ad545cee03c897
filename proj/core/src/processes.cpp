#include "parq/processes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>

#include "parq/csv.hpp"
#include "parq/error.hpp"

namespace parq {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("cannot parse number '" + std::string(text) + "' in " + std::string(what));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_rate(double rate, std::string_view law) {
  if (!std::isfinite(rate) || !(rate > 0.0)) {
    throw ConfigError(std::string(law) + ": rates must be finite and > 0");
  }
}

void validate(const Law::Variant& v) {
  std::visit(Overloaded{
                 [](const Exponential& e) { check_rate(e.rate, "exp"); },
                 [](const Deterministic& d) {
                   if (!std::isfinite(d.value) || d.value < 0.0) {
                     throw ConfigError("det: value must be finite and >= 0");
                   }
                 },
                 [](const Uniform& u) {
                   if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || u.lo < 0.0 ||
                       u.lo > u.hi) {
                     throw ConfigError("unif: need 0 <= lo <= hi");
                   }
                 },
                 [](const HyperExponential& h) {
                   if (h.probabilities.empty() ||
                       h.probabilities.size() != h.rates.size()) {
                     throw ConfigError("hyperexp: need matching nonempty probabilities and rates");
                   }
                   double total = 0.0;
                   for (double p : h.probabilities) {
                     if (!(p >= 0.0 && p <= 1.0)) {
                       throw ConfigError("hyperexp: probabilities must lie in [0,1]");
                     }
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-9) {
                     throw ConfigError("hyperexp: probabilities must sum to 1");
                   }
                   for (double r : h.rates) check_rate(r, "hyperexp");
                 },
             },
             v);
}

// Consumes one uniform unless there is a single category.
std::size_t sample_categorical(std::span<const double> probabilities, Xoshiro256& rng) {
  if (probabilities.size() == 1) return 0;
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] > 0.0) last_positive = i;
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

bool irreducible(const std::vector<std::vector<double>>& transition) {
  const std::size_t n = transition.size();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = true;
    std::size_t count = 1;
    while (!frontier.empty()) {
      const std::size_t s = frontier.front();
      frontier.pop();
      for (std::size_t t = 0; t < n; ++t) {
        if (transition[s][t] > 0.0 && !seen[t]) {
          seen[t] = true;
          ++count;
          frontier.push(t);
        }
      }
    }
    if (count != n) return false;
  }
  return true;
}

void validate(const InputModel::Variant& v) {
  std::visit(Overloaded{
                 [](const IidModel& m) {
                   if (!m.xi.strictly_positive()) {
                     throw ConfigError("xi law must be strictly positive");
                   }
                 },
                 [](const MarkovModel& m) {
                   const std::size_t n = m.transition.size();
                   if (n == 0) {
                     throw ConfigError("markov model needs at least one state");
                   }
                   if (m.sigma.size() != n || m.xi.size() != n) {
                     throw ConfigError("markov model needs one sigma and one xi law per state");
                   }
                   for (const auto& row : m.transition) {
                     if (row.size() != n) {
                       throw ConfigError("markov transition matrix must be square");
                     }
                     double total = 0.0;
                     for (double p : row) {
                       if (!(p >= 0.0 && p <= 1.0)) {
                         throw ConfigError("markov transition entries must lie in [0,1]");
                       }
                       total += p;
                     }
                     if (std::abs(total - 1.0) > 1e-9) {
                       throw ConfigError("markov transition rows must sum to 1");
                     }
                   }
                   if (!irreducible(m.transition)) {
                     throw ConfigError("markov chain is not irreducible");
                   }
                   for (const auto& xi : m.xi) {
                     if (!xi.strictly_positive()) {
                       throw ConfigError("xi law must be strictly positive in every state");
                     }
                   }
                 },
                 [](const TraceModel& t) {
                   if (t.path.empty()) {
                     throw ConfigError("trace model needs a file path");
                   }
                 },
             },
             v);
}

std::string join_laws(const std::vector<Law>& laws) {
  std::string out;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    if (i) out += ';';
    out += laws[i].to_string();
  }
  return out;
}

}  // namespace

Law::Law(Variant v) : law_(std::move(v)) { validate(law_); }

Law Law::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto open = t.find('(');
  if (open == std::string_view::npos || t.back() != ')') {
    throw ConfigError("cannot parse law '" + std::string(t) + "'");
  }
  const std::string_view name = trim(t.substr(0, open));
  const std::string_view args = t.substr(open + 1, t.size() - open - 2);
  const auto parts = split(args, ',');

  auto expect = [&](std::size_t n) {
    if (parts.size() != n) {
      throw ConfigError("law '" + std::string(t) + "' expects " + std::to_string(n) +
                        " argument(s)");
    }
  };

  if (name == "exp") {
    expect(1);
    return Law(Exponential{parse_real(parts[0], t)});
  }
  if (name == "det") {
    expect(1);
    return Law(Deterministic{parse_real(parts[0], t)});
  }
  if (name == "unif") {
    expect(2);
    return Law(Uniform{parse_real(parts[0], t), parse_real(parts[1], t)});
  }
  if (name == "hyperexp") {
    HyperExponential h;
    for (auto part : parts) {
      const auto colon = part.find(':');
      if (colon == std::string_view::npos) {
        throw ConfigError("hyperexp phases are written probability:rate, got '" +
                          std::string(part) + "'");
      }
      h.probabilities.push_back(parse_real(part.substr(0, colon), t));
      h.rates.push_back(parse_real(part.substr(colon + 1), t));
    }
    return Law(std::move(h));
  }
  throw ConfigError("unknown law '" + std::string(name) + "' (expected exp, det, unif, hyperexp)");
}

double Law::mean() const noexcept {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Deterministic& d) { return d.value; },
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const HyperExponential& h) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < h.rates.size(); ++i) {
                            m += h.probabilities[i] / h.rates[i];
                          }
                          return m;
                        },
                    },
                    law_);
}

bool Law::strictly_positive() const noexcept {
  return std::visit(Overloaded{
                        [](const Exponential&) { return true; },
                        [](const Deterministic& d) { return d.value > 0.0; },
                        [](const Uniform& u) { return u.hi > 0.0; },
                        [](const HyperExponential&) { return true; },
                    },
                    law_);
}

double Law::sample(Xoshiro256& rng) const {
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return -std::log(rng.uniform_open()) / e.rate; },
                        [](const Deterministic& d) { return d.value; },
                        [&](const Uniform& u) { return u.lo + (u.hi - u.lo) * rng.uniform_open(); },
                        [&](const HyperExponential& h) {
                          const std::size_t phase = sample_categorical(h.probabilities, rng);
                          return -std::log(rng.uniform_open()) / h.rates[phase];
                        },
                    },
                    law_);
}

std::string Law::to_string() const {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return "exp(" + format_number(e.rate) + ")"; },
                        [](const Deterministic& d) { return "det(" + format_number(d.value) + ")"; },
                        [](const Uniform& u) {
                          return "unif(" + format_number(u.lo) + "," + format_number(u.hi) + ")";
                        },
                        [](const HyperExponential& h) {
                          std::string s = "hyperexp(";
                          for (std::size_t i = 0; i < h.rates.size(); ++i) {
                            if (i) s += ',';
                            s += format_number(h.probabilities[i]) + ":" + format_number(h.rates[i]);
                          }
                          return s + ")";
                        },
                    },
                    law_);
}

InputModel::InputModel(Variant v) : model_(std::move(v)) { validate(model_); }

std::string_view InputModel::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const IidModel&) { return std::string_view("iid"); },
                        [](const MarkovModel&) { return std::string_view("markov"); },
                        [](const TraceModel&) { return std::string_view("trace"); },
                    },
                    model_);
}

std::string InputModel::describe() const {
  return std::visit(
      Overloaded{
          [](const IidModel& m) {
            return "iid(sigma=" + m.sigma.to_string() + ";xi=" + m.xi.to_string() + ")";
          },
          [](const MarkovModel& m) {
            std::string s = "markov(transition=";
            for (std::size_t i = 0; i < m.transition.size(); ++i) {
              if (i) s += ';';
              for (std::size_t j = 0; j < m.transition[i].size(); ++j) {
                if (j) s += ' ';
                s += format_number(m.transition[i][j]);
              }
            }
            return s + ";sigma=" + join_laws(m.sigma) + ";xi=" + join_laws(m.xi) + ")";
          },
          [](const TraceModel& t) { return "trace(" + t.path.string() + ")"; },
      },
      model_);
}

std::vector<Mark> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open trace file " + path.string());
  }
  std::vector<Mark> marks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;

    const auto gap = body.find_first_of(" \t");
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (gap == std::string_view::npos) {
      throw InputError(where + ": expected two fields 'sigma xi'");
    }
    try {
      const double sigma = parse_real(body.substr(0, gap), where);
      const double xi = parse_real(body.substr(gap + 1), where);
      marks.emplace_back(sigma, xi);
    } catch (const ConfigError& e) {
      throw InputError(e.what());
    } catch (const DomainError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return marks;
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const std::size_t n = transition.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] += 0.5 * pi[i];
      for (std::size_t j = 0; j < n; ++j) {
        next[j] += 0.5 * pi[i] * transition[i][j];
      }
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (change < 1e-15) break;
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;
  return pi;
}

MarkSequence generate(const InputModel& model, std::uint64_t seed, std::size_t length) {
  if (length < 1) {
    throw ConfigError("mark sequence length must be >= 1");
  }
  std::vector<Mark> marks;
  marks.reserve(length);

  std::visit(Overloaded{
                 [&](const IidModel& m) {
                   Xoshiro256 rng(seed);
                   for (std::size_t n = 0; n < length; ++n) {
                     const double sigma = m.sigma.sample(rng);
                     const double xi = m.xi.sample(rng);
                     marks.emplace_back(sigma, xi);
                   }
                 },
                 [&](const MarkovModel& m) {
                   Xoshiro256 rng(seed);
                   const auto pi = stationary_distribution(m.transition);
                   std::size_t state = sample_categorical(pi, rng);
                   for (std::size_t n = 0; n < length; ++n) {
                     const double sigma = m.sigma[state].sample(rng);
                     const double xi = m.xi[state].sample(rng);
                     marks.emplace_back(sigma, xi);
                     state = sample_categorical(m.transition[state], rng);
                   }
                 },
                 [&](const TraceModel& t) {
                   auto all = read_trace(t.path);
                   if (all.size() < length) {
                     throw InputError("trace " + t.path.string() + " has " +
                                      std::to_string(all.size()) + " marks, " +
                                      std::to_string(length) + " requested");
                   }
                   all.erase(all.begin() + static_cast<std::ptrdiff_t>(length), all.end());
                   marks = std::move(all);
                 },
             },
             model.variant());
  return MarkSequence(std::move(marks), seed, model.describe());
}

namespace {

MeanValue trace_mean(const TraceModel& t, bool sigma) {
  const auto marks = read_trace(t.path);
  if (marks.empty()) {
    throw InputError("trace " + t.path.string() + " is empty");
  }
  double total = 0.0;
  for (const auto& m : marks) total += sigma ? m.sigma() : m.xi();
  return {total / static_cast<double>(marks.size()), true};
}

MeanValue model_mean(const InputModel& model, bool sigma) {
  return std::visit(Overloaded{
                        [&](const IidModel& m) {
                          return MeanValue{sigma ? m.sigma.mean() : m.xi.mean(), false};
                        },
                        [&](const MarkovModel& m) {
                          const auto pi = stationary_distribution(m.transition);
                          double mean = 0.0;
                          for (std::size_t s = 0; s < pi.size(); ++s) {
                            mean += pi[s] * (sigma ? m.sigma[s].mean() : m.xi[s].mean());
                          }
                          return MeanValue{mean, false};
                        },
                        [&](const TraceModel& t) { return trace_mean(t, sigma); },
                    },
                    model.variant());
}

}  // namespace

MeanValue mean_sigma(const InputModel& model) { return model_mean(model, true); }
MeanValue mean_xi(const InputModel& model) { return model_mean(model, false); }

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    case Stability::critical:
      return "critical";
  }
  return "unknown";
}

Stability stability_check(const InputModel& model, std::size_t servers) {
  if (servers < 1) {
    throw DomainError("stability check needs at least one server");
  }
  const double load = mean_sigma(model).value;
  const double capacity = static_cast<double>(servers) * mean_xi(model).value;
  if (std::abs(load - capacity) <= 1e-12 * std::max(std::abs(load), std::abs(capacity))) {
    return Stability::critical;
  }
  return load < capacity ? Stability::stable : Stability::unstable;
}

}  // namespace parq
