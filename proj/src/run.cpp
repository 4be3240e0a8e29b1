#include "bmc/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bmc/samplers.hpp"

namespace bmc {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError("invalid " + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

bool has(const std::vector<RunMethod>& methods, RunMethod m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(RunMethod method) {
  switch (method) {
    case RunMethod::Exact: return "exact";
    case RunMethod::Scott: return "scott";
    case RunMethod::Congdon: return "congdon";
    case RunMethod::Gibbs: return "gibbs";
    case RunMethod::Coupled: return "coupled";
  }
  return "unknown";
}

std::vector<RunMethod> parse_methods(const std::string& list) {
  std::vector<RunMethod> out;
  for (const auto& name : split(list, ',')) {
    RunMethod m;
    if (name == "exact") m = RunMethod::Exact;
    else if (name == "scott") m = RunMethod::Scott;
    else if (name == "congdon") m = RunMethod::Congdon;
    else if (name == "gibbs") m = RunMethod::Gibbs;
    else if (name == "coupled") m = RunMethod::Coupled;
    else throw UsageError("unknown method '" + name + "'");
    if (!has(out, m)) out.push_back(m);
  }
  if (out.empty()) throw UsageError("method list is empty");
  return out;
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    out[key] = parse_number(item.substr(eq + 1), "parameter " + key);
  }
  return out;
}

ExampleConfig make_example_config(const std::string& name,
                                  const std::map<std::string, double>& params) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : params) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        throw UsageError("parameter '" + key + "' does not apply to " + name);
      }
    }
  };
  auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto get_n = [&](int fallback) {
    const double n = get("n", fallback);
    if (n < 1 || std::floor(n) != n) throw UsageError("n must be a positive integer");
    return static_cast<int>(n);
  };

  ExampleConfig config;
  if (name == "ex1") {
    allow({});
    config = Ex1Config{};
  } else if (name == "ex2") {
    allow({});
    config = Ex2Config{};
  } else if (name == "ex3") {
    allow({"n", "m"});
    Ex3Config c;
    c.n = get_n(c.n);
    c.m = get("m", c.m);
    config = c;
  } else if (name == "ex3-three") {
    allow({"n", "a", "b", "c", "d"});
    Ex3ThreeConfig c;
    c.n = get_n(c.n);
    c.a = get("a", c.a);
    c.b = get("b", c.b);
    c.c = get("c", c.c);
    c.d = get("d", c.d);
    config = c;
  } else if (name == "ex4") {
    allow({"a", "b"});
    Ex4Config c;
    c.a = get("a", c.a);
    c.b = get("b", c.b);
    config = c;
  } else {
    throw UsageError("unknown example '" + name + "' (expected ex1, ex2, ex3, ex3-three, ex4)");
  }
  try {
    (void)build_example(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(name + ": " + e.what());
  }
  return config;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("grid must be min:max:count, got '" + spec + "'");
  const double lo = parse_number(parts[0], "grid minimum");
  const double hi = parse_number(parts[1], "grid maximum");
  const double count = parse_number(parts[2], "grid count");
  if (count < 2 || std::floor(count) != count) throw UsageError("grid count must be an integer >= 2");
  if (!(lo < hi)) throw UsageError("grid minimum must be below its maximum");
  return linspace(lo, hi, static_cast<int>(count));
}

std::vector<double> default_grid(const ExampleConfig& config) {
  if (std::holds_alternative<Ex1Config>(config)) return linspace(0.05, 3.0, 60);
  if (std::holds_alternative<Ex2Config>(config)) return linspace(-3.0, 8.0, 56);
  if (std::holds_alternative<Ex4Config>(config)) return linspace(-3.0, 12.0, 61);
  const int n = std::holds_alternative<Ex3Config>(config) ? std::get<Ex3Config>(config).n
                                                          : std::get<Ex3ThreeConfig>(config).n;
  std::vector<double> out;
  for (int y = 0; y <= n; ++y) out.push_back(y);
  return out;
}

void validate(const RunConfig& config) {
  if (config.methods.empty()) throw UsageError("no methods requested");
  if (config.T < 1) throw UsageError("T must be at least 1");
  if (config.burn_in < 0) throw UsageError("burn-in must be nonnegative");
  if (config.y_values.empty()) throw UsageError("no observation values");
  if (has(config.methods, RunMethod::Coupled) && !std::holds_alternative<Ex2Config>(config.example)) {
    throw UsageError("method 'coupled' is only defined for ex2");
  }
  const ModelSet set = build_example(config.example);
  for (std::size_t i = 0; i < config.y_values.size(); ++i) {
    const double y = config.y_values[i];
    if (!set.observation_space().contains(y)) {
      throw UsageError("observation " + format_number(y) + " outside " +
                       set.observation_space().describe() + " for " + set.label());
    }
    if (i > 0 && !(y > config.y_values[i - 1])) {
      throw UsageError("observation values must be strictly increasing");
    }
  }
}

RandomStream point_stream(std::uint64_t seed, std::size_t y_index, RunMethod scheme) {
  // Scott and Congdon read the same within-model draws.
  const RunMethod key = scheme == RunMethod::Scott ? RunMethod::Congdon : scheme;
  return RandomStream(seed, combine_ids(static_cast<std::uint64_t>(y_index),
                                        static_cast<std::uint64_t>(key)));
}

std::vector<EstimateResult> run_estimate(const RunConfig& config, double y, std::size_t y_index) {
  const ModelSet set = build_example(config.example);
  std::vector<EstimateResult> out;
  std::optional<SampleMatrix> within;
  for (RunMethod m : config.methods) {
    switch (m) {
      case RunMethod::Exact:
        out.push_back(exact_estimate(set, y));
        break;
      case RunMethod::Scott:
      case RunMethod::Congdon:
        if (!within) {
          within = sample_within_model_posteriors(set, y, config.T,
                                                  point_stream(config.seed, y_index, m));
        }
        out.push_back(m == RunMethod::Scott ? scott_estimate(set, *within)
                                            : congdon_estimate(set, *within));
        break;
      case RunMethod::Gibbs:
        out.push_back(gibbs_corrected(set, y, config.T, point_stream(config.seed, y_index, m),
                                      GibbsOptions{config.burn_in, true}));
        break;
      case RunMethod::Coupled: {
        RandomStream rng = point_stream(config.seed, y_index, m);
        out.push_back(congdon_coupled_ex2(y, config.T, rng));
        break;
      }
    }
    out.back().seed = config.seed;
  }
  return out;
}

SweepTable run_sweep(const RunConfig& config) {
  validate(config);
  SweepTable table;
  table.example = example_name(config.example);
  table.parameters = example_parameters(config.example);
  table.T = config.T;
  table.seed = config.seed;
  table.burn_in = config.burn_in;
  table.methods = config.methods;
  table.default_grid = config.default_grid;
  table.rows.resize(config.y_values.size());

  auto evaluate = [&](std::size_t i) {
    const double y = config.y_values[i];
    SweepRow row;
    row.y = y;
    for (const auto& r : run_estimate(config, y, i)) {
      const double p = r.probs(0);
      const double se = r.stderrs(0);
      switch (r.method) {
        case Method::Exact: row.exact = p; break;
        case Method::Scott: row.scott = p; row.scott_se = se; break;
        case Method::Congdon: row.congdon = p; row.congdon_se = se; break;
        case Method::GibbsCorrected: row.gibbs = p; row.gibbs_se = se; break;
        case Method::CongdonCoupled: row.coupled = p; break;
        case Method::DiracPlugin: break;
      }
    }
    table.rows[i] = row;
  };

  const std::size_t n = config.y_values.size();
  unsigned workers = config.jobs != 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) evaluate(i);
    return table;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

void write_csv(std::ostream& os, const SweepTable& table) {
  std::string methods;
  for (RunMethod m : table.methods) methods += (methods.empty() ? "" : ",") + to_string(m);
  os << "# schema: " << kSweepSchema << '\n'
     << "# tool: bmc " << kToolVersion << '\n'
     << "# example: " << table.example << '\n'
     << "# parameters: " << table.parameters << '\n'
     << "# T: " << table.T << '\n'
     << "# seed: " << table.seed << '\n'
     << "# burn_in: " << table.burn_in << '\n'
     << "# methods: " << methods << '\n'
     << "# grid: " << (table.default_grid ? "default" : "user") << '\n'
     << "# quantity: P(M=1|y)\n"
     << "y,exact,scott,scott_se,congdon,congdon_se,gibbs,gibbs_se,coupled\n";
  auto cell = [&](const std::optional<double>& v) {
    os << ',';
    if (v) os << format_number(*v);
  };
  for (const auto& r : table.rows) {
    os << format_number(r.y);
    cell(r.exact);
    cell(r.scott);
    cell(r.scott_se);
    cell(r.congdon);
    cell(r.congdon_se);
    cell(r.gibbs);
    cell(r.gibbs_se);
    cell(r.coupled);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const SweepTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(os, table);
  os.flush();
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

std::vector<FigureSpec> figure_specs(std::uint64_t seed, Eigen::Index T_override) {
  using enum RunMethod;
  auto spec = [&](std::string file, ExampleConfig example, std::vector<RunMethod> methods,
                  Eigen::Index T) {
    RunConfig c;
    c.example = example;
    c.methods = std::move(methods);
    c.y_values = default_grid(example);
    c.default_grid = true;
    c.T = T_override > 0 ? T_override : T;
    c.seed = seed;
    return FigureSpec{std::move(file), std::move(c)};
  };
  std::vector<FigureSpec> out;
  out.push_back(spec("fig1_ex1.csv", Ex1Config{}, {Exact, Scott, Congdon, Gibbs}, 1'000'000));
  out.push_back(spec("fig2_ex2.csv", Ex2Config{}, {Exact, Scott, Congdon, Coupled}, 10'000));
  out.push_back(spec("fig3_ex3_m510.csv", Ex3Config{15, 510.0}, {Exact, Congdon}, 10'000));
  out.push_back(spec("fig3_ex3_m100.csv", Ex3Config{15, 100.0}, {Exact, Congdon}, 10'000));
  const Ex3ThreeConfig three[] = {{17, 2.5, 12.5, 501.5, 500.0},
                                  {25, 1.5, 4.0, 540.0, 200.0},
                                  {13, 0.5, 100.5, 20.0, 10.0},
                                  {12, 0.3, 1.8, 200.0, 200.0}};
  for (int i = 0; i < 4; ++i) {
    out.push_back(spec("fig4_panel" + std::to_string(i + 1) + ".csv", three[i], {Exact, Congdon}, 10'000));
  }
  const Ex4Config four[] = {{0.24, 8.9}, {0.56, 0.7}, {4.1, 0.46}, {0.98, 0.081}};
  for (int i = 0; i < 4; ++i) {
    out.push_back(spec("fig5_panel" + std::to_string(i + 1) + ".csv", four[i], {Exact, Congdon}, 10'000));
  }
  return out;
}

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir, std::uint64_t seed,
                                                 Eigen::Index T_override, unsigned jobs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> paths;
  for (auto& fig : figure_specs(seed, T_override)) {
    fig.config.jobs = jobs;
    const auto path = dir / fig.file_name;
    write_csv(path, run_sweep(fig.config));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace bmc
