#include "config.hpp"

#include <charconv>
#include <fstream>

#include "parq/error.hpp"

namespace parq::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
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

template <class T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_reals(std::string_view text, std::string_view key) {
  std::vector<double> out;
  std::string normalized(text);
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  for (auto part : split(normalized, ' ')) {
    if (!part.empty()) out.push_back(parse_number<double>(part, key));
  }
  return out;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys{
      {"model.kind", "iid", "iid | markov | trace"},
      {"model.sigma", "exp(1)",
       "service law: exp(rate), det(v), unif(lo,hi), hyperexp(p:rate,...); "
       "for markov one law per state separated by ';'"},
      {"model.xi", "exp(1)", "inter-arrival law, same syntax as model.sigma; must be > 0"},
      {"model.transition", "", "markov transition matrix, rows separated by ';'"},
      {"model.trace", "", "trace file with one 'sigma xi' pair per line"},
      {"run.seeds", "1", "seed list, e.g. 1,2,7 or 1..200"},
      {"run.horizon", "1000", "number of customers per run"},
      {"run.jobs", "1", "seeds processed in parallel"},
      {"run.out", "", "CSV output path (empty: stdout for simulate, none otherwise)"},
      {"system.servers", "1", "number of servers S"},
      {"system.rank", "1", "allocation rank P (1 = join the shortest workload)"},
      {"system.initial", "", "initial sorted profile (empty: all zeros)"},
      {"simulate.format", "wide", "wide (one row per profile) | long (step,system,coordinate,value)"},
      {"loynes.tolerance", "1e-6", "sup-norm increment declaring convergence"},
      {"loynes.window", "64", "first backward horizon of the doubling schedule"},
      {"loynes.max_n", "4194304", "largest backward horizon"},
      {"loynes.snapshots", "", "CSV path for M_n at every doubling"},
      {"compare.mode", "theorem1", "theorem1 (S vs N servers) | theorem2 (JSW vs rank P)"},
      {"compare.smaller", "1", "N, servers of the smaller system in theorem1 mode"},
      {"compare.initial_tilde", "", "theorem2: initial profile of the rank-P system"},
      {"compare.corrupt_step", "", "test hook: corrupt the checked profile at this step"},
      {"lemmas.instances", "10000", "instances per lemma"},
      {"lemmas.min_dim", "1", "smallest dimension"},
      {"lemmas.max_dim", "8", "largest dimension"},
      {"lemmas.tolerance", "1e-9", "slack for continuous-valued instances"},
      {"lemmas.max_reported", "5", "counterexamples printed per lemma"},
  };
  return keys;
}

Settings::Settings() {
  for (const auto& k : config_keys()) values_.emplace(std::string(k.name), std::string(k.default_value));
}

void Settings::set(std::string_view key, std::string value) {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  it->second = std::move(value);
}

void Settings::assign(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), std::string(trim(assignment.substr(eq + 1))));
}

void Settings::load(std::istream& in, std::string_view source) {
  std::string section;
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
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError(where + ": malformed section header");
      }
      section = std::string(trim(body.substr(1, body.size() - 2)));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    const std::string key =
        (section.empty() ? "" : section + ".") + std::string(trim(body.substr(0, eq)));
    try {
      set(key, std::string(trim(body.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

void Settings::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  load(in, path);
}

const std::string& Settings::raw(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  return it->second;
}

double Settings::real(std::string_view key) const { return parse_number<double>(raw(key), key); }

std::size_t Settings::count(std::string_view key) const {
  return parse_number<std::size_t>(raw(key), key);
}

std::int64_t Settings::integer(std::string_view key) const {
  return parse_number<std::int64_t>(raw(key), key);
}

std::vector<double> Settings::reals(std::string_view key) const {
  return parse_reals(raw(key), key);
}

std::vector<std::uint64_t> Settings::seeds(std::string_view key) const {
  std::vector<std::uint64_t> out;
  for (auto part : split(raw(key), ',')) {
    if (part.empty()) continue;
    if (const auto dots = part.find(".."); dots != std::string_view::npos) {
      const auto lo = parse_number<std::uint64_t>(part.substr(0, dots), key);
      const auto hi = parse_number<std::uint64_t>(part.substr(dots + 2), key);
      if (hi < lo) {
        throw ConfigError("config key '" + std::string(key) + "': empty range '" +
                          std::string(part) + "'");
      }
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(parse_number<std::uint64_t>(part, key));
    }
  }
  return out;
}

InputModel build_model(const Settings& settings) {
  const std::string kind = settings.text("model.kind");
  auto with_key = [](std::string_view key, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + std::string(key) + "': " + e.what());
    }
  };

  if (kind == "iid") {
    Law sigma = with_key("model.sigma", [&] { return Law::parse(settings.text("model.sigma")); });
    Law xi = with_key("model.xi", [&] { return Law::parse(settings.text("model.xi")); });
    return with_key("model.xi", [&] { return InputModel::iid(std::move(sigma), std::move(xi)); });
  }
  if (kind == "markov") {
    MarkovModel m;
    for (auto row : split(settings.raw("model.transition"), ';')) {
      m.transition.push_back(parse_reals(row, "model.transition"));
    }
    for (auto law : split(settings.raw("model.sigma"), ';')) {
      m.sigma.push_back(with_key("model.sigma", [&] { return Law::parse(law); }));
    }
    for (auto law : split(settings.raw("model.xi"), ';')) {
      m.xi.push_back(with_key("model.xi", [&] { return Law::parse(law); }));
    }
    return with_key("model.transition", [&] { return InputModel(std::move(m)); });
  }
  if (kind == "trace") {
    return with_key("model.trace",
                    [&] { return InputModel(TraceModel{settings.text("model.trace")}); });
  }
  throw ConfigError("config key 'model.kind': unknown model kind '" + kind + "'");
}

ExperimentConfig build_experiment(const Settings& s) {
  auto optional_reals = [&](std::string_view key) -> std::optional<std::vector<double>> {
    auto v = s.reals(key);
    if (v.empty()) return std::nullopt;
    return v;
  };

  ExperimentConfig c{
      build_model(s),
      s.seeds("run.seeds"),
      s.count("run.horizon"),
      s.count("run.jobs"),
      s.text("run.out"),
      s.count("system.servers"),
      s.count("system.rank"),
      optional_reals("system.initial"),
      s.text("simulate.format"),
      LoynesOptions{s.real("loynes.tolerance"), s.count("loynes.window"), s.count("loynes.max_n")},
      s.text("loynes.snapshots"),
      CompareMode::theorem1,
      s.count("compare.smaller"),
      optional_reals("compare.initial_tilde"),
      std::nullopt,
      LemmaSuiteOptions{},
  };

  if (c.seeds.empty()) throw ConfigError("config key 'run.seeds': no seeds given");
  if (c.horizon < 1) throw ConfigError("config key 'run.horizon': must be >= 1");
  if (c.jobs < 1) throw ConfigError("config key 'run.jobs': must be >= 1");
  if (c.servers < 1) throw ConfigError("config key 'system.servers': must be >= 1");
  if (c.rank < 1 || c.rank > c.servers) {
    throw ConfigError("config key 'system.rank': must lie in [1, system.servers]");
  }
  if (c.initial && c.initial->size() != c.servers) {
    throw ConfigError("config key 'system.initial': expected " + std::to_string(c.servers) +
                      " coordinates");
  }
  if (c.simulate_format != "wide" && c.simulate_format != "long") {
    throw ConfigError("config key 'simulate.format': expected wide or long");
  }
  if (!(c.loynes.tolerance > 0.0)) {
    throw ConfigError("config key 'loynes.tolerance': must be > 0");
  }
  if (c.loynes.window < 1 || c.loynes.max_n < c.loynes.window) {
    throw ConfigError("config key 'loynes.window': need 1 <= loynes.window <= loynes.max_n");
  }

  const std::string mode = s.text("compare.mode");
  if (mode == "theorem1") {
    c.compare_mode = CompareMode::theorem1;
  } else if (mode == "theorem2") {
    c.compare_mode = CompareMode::theorem2;
  } else {
    throw ConfigError("config key 'compare.mode': expected theorem1 or theorem2");
  }
  if (c.compare_smaller < 1 || c.compare_smaller > c.servers) {
    throw ConfigError("config key 'compare.smaller': must lie in [1, system.servers]");
  }
  if (c.compare_initial_tilde && c.compare_initial_tilde->size() != c.servers) {
    throw ConfigError("config key 'compare.initial_tilde': expected " +
                      std::to_string(c.servers) + " coordinates");
  }
  if (!s.text("compare.corrupt_step").empty()) {
    c.compare_corrupt_step = s.count("compare.corrupt_step");
  }

  c.lemmas.instances = s.count("lemmas.instances");
  c.lemmas.min_dim = s.count("lemmas.min_dim");
  c.lemmas.max_dim = s.count("lemmas.max_dim");
  c.lemmas.tolerance = s.real("lemmas.tolerance");
  c.lemmas.max_reported = s.count("lemmas.max_reported");
  if (c.lemmas.min_dim < 1 || c.lemmas.max_dim < c.lemmas.min_dim) {
    throw ConfigError("config key 'lemmas.max_dim': need 1 <= lemmas.min_dim <= lemmas.max_dim");
  }
  return c;
}

}  // namespace parq::cli
