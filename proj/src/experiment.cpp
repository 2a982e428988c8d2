#include "edgecache/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "edgecache/csv.hpp"

namespace edgecache {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kResultsHeader = "axis,value,policy,seed,mean_hit_ratio,final_regret";
constexpr std::string_view kReportHeader =
    "axis,value,policy,n,mean_hit_ratio,stderr_hit_ratio,mean_final_regret,stderr_final_regret,"
    "improvement_vs_popular,improvement_vs_random";

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why = "") {
  fail(ErrorCode::ConfigError, "field `" + key + "`: cannot use `" + value + "`" + (why.empty() ? "" : " (" + why + ")"));
}

template <class T>
T parse_scalar(const std::string& key, const std::string& value) {
  if constexpr (std::is_same_v<T, std::uint64_t>) {
    std::int64_t v;
    if (!csv::parse(value, v) || v < 0) bad_value(key, value, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  } else {
    T v;
    if (!csv::parse(value, v)) bad_value(key, value, "expected a number");
    return v;
  }
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (auto field : csv::split(value)) {
    field = csv::trim(field);
    if (field.empty()) continue;
    if constexpr (std::is_same_v<T, std::string>) {
      out.emplace_back(field);
    } else {
      out.push_back(parse_scalar<T>(key, std::string(field)));
    }
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>) {
      out += items[i];
    } else if constexpr (std::is_floating_point_v<T>) {
      out += csv::format(items[i]);
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), ErrorCode::IoError, "cannot create output directory " + dir.string());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

std::size_t worker_count(int requested, std::size_t tasks) {
  std::size_t n = requested > 0 ? static_cast<std::size_t>(requested) : std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(tasks, 1));
}

/// Runs task(i) for i in [0, n) on a small pool. Tasks must not share mutable state.
template <class Task>
void parallel_for(std::size_t n, int threads, Task task) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t count = worker_count(threads, n);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / double(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(xs.size() - 1)) / std::sqrt(double(xs.size()));
}

std::string optional_field(const std::optional<double>& v) { return v ? csv::format(*v) : std::string(); }

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "horizon",      "library_size",    "capacity",        "w_snm",        "zipf_delta",   "pareto_beta",
      "pareto_n_min", "requests_per_slot", "exploration_beta", "lifespan_min", "lifespan_max", "size_min",
      "size_max",     "alloc_window",    "alloc_smoothing", "alloc_prior",  "weight_floor", "influence_floor",
      "candidate_window", "seeds",        "policies",        "axis",            "values",       "out",          "threads"};
  return k;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value(csv::trim(raw));
  if (key == "horizon") horizon = parse_scalar<int>(key, value);
  else if (key == "library_size") library_size = parse_scalar<int>(key, value);
  else if (key == "capacity") capacity = parse_scalar<double>(key, value);
  else if (key == "w_snm") w_snm = parse_scalar<double>(key, value);
  else if (key == "zipf_delta") zipf_delta = parse_scalar<double>(key, value);
  else if (key == "pareto_beta") pareto_beta = parse_scalar<double>(key, value);
  else if (key == "pareto_n_min") pareto_n_min = parse_scalar<double>(key, value);
  else if (key == "requests_per_slot") requests_per_slot = parse_scalar<int>(key, value);
  else if (key == "exploration_beta") exploration_beta = parse_scalar<double>(key, value);
  else if (key == "lifespan_min") lifespan_min = parse_scalar<int>(key, value);
  else if (key == "lifespan_max") lifespan_max = parse_scalar<int>(key, value);
  else if (key == "size_min") size_min = parse_scalar<int>(key, value);
  else if (key == "size_max") size_max = parse_scalar<int>(key, value);
  else if (key == "alloc_window") alloc_window = parse_scalar<int>(key, value);
  else if (key == "alloc_smoothing") alloc_smoothing = parse_scalar<double>(key, value);
  else if (key == "alloc_prior") alloc_prior = parse_scalar<double>(key, value);
  else if (key == "weight_floor") weight_floor = parse_scalar<double>(key, value);
  else if (key == "influence_floor") influence_floor = parse_scalar<double>(key, value);
  else if (key == "candidate_window") candidate_window = parse_scalar<int>(key, value);
  else if (key == "seeds") seeds = parse_list<std::uint64_t>(key, value);
  else if (key == "policies") policies = parse_list<std::string>(key, value);
  else if (key == "axis") axis = value;
  else if (key == "values") values = parse_list<double>(key, value);
  else if (key == "out") out = value;
  else if (key == "threads") threads = parse_scalar<int>(key, value);
  else fail(ErrorCode::ConfigError, "unknown config key `" + key + "`");
}

void ExperimentConfig::load_file(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    require(eq != std::string_view::npos, ErrorCode::ConfigError,
            path.string() + ":" + std::to_string(line_no) + ": expected `key = value`");
    set(std::string(csv::trim(body.substr(0, eq))), std::string(body.substr(eq + 1)));
  }
}

void ExperimentConfig::load_env(const char* prefix) {
  for (const auto& key : keys()) {
    std::string name = prefix;
    for (char c : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(name.c_str())) set(key, v);
  }
}

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* key, const std::string& why) {
    require(ok, ErrorCode::ConfigError, std::string("field `") + key + "`: " + why);
  };
  check(horizon >= 1, "horizon", "must be >= 1");
  check(library_size >= 2, "library_size", "must be >= 2");
  check(capacity >= 0.0, "capacity", "must be >= 0");
  check(w_snm >= 0.0 && w_snm <= 1.0, "w_snm", "must lie in [0,1]");
  check(zipf_delta >= 0.0, "zipf_delta", "must be >= 0");
  check(pareto_beta > 1.0, "pareto_beta", "must exceed 1");
  check(pareto_n_min > 0.0, "pareto_n_min", "must be positive");
  check(requests_per_slot >= 1, "requests_per_slot", "must be >= 1");
  check(exploration_beta > 0.0, "exploration_beta", "must be positive");
  check(lifespan_min >= 1 && lifespan_max >= lifespan_min, "lifespan_max", "need 1 <= lifespan_min <= lifespan_max");
  check(size_min >= 1 && size_max >= size_min, "size_max", "need 1 <= size_min <= size_max");
  check(alloc_window >= 1, "alloc_window", "must be >= 1");
  check(alloc_smoothing >= 0.0 && alloc_smoothing <= 1.0, "alloc_smoothing", "must lie in [0,1]");
  check(alloc_prior >= 0.0 && alloc_prior <= 1.0, "alloc_prior", "must lie in [0,1]");
  check(weight_floor > 0.0 && weight_floor <= 1.0, "weight_floor", "must lie in (0,1]");
  check(influence_floor > 0.0 && influence_floor <= 0.1, "influence_floor", "must lie in (0,0.1]");
  check(candidate_window >= 1, "candidate_window", "must be >= 1");
  check(!seeds.empty(), "seeds", "must not be empty");
  check(!policies.empty(), "policies", "must not be empty");
  for (const auto& p : policies) {
    check(std::find(std::begin(kPolicyNames), std::end(kPolicyNames), p) != std::end(kPolicyNames), "policies",
          "unknown policy `" + p + "`");
  }
  check(axis == "capacity" || axis == "library_size", "axis", "must be capacity or library_size");
  check(!values.empty(), "values", "must not be empty");
  for (std::size_t i = 1; i < values.size(); ++i) check(values[i] > values[i - 1], "values", "must be strictly increasing");
  for (double v : values) {
    check(v >= 0.0, "values", "must be non-negative");
    if (axis == "library_size") check(v >= 2.0 && std::floor(v) == v, "values", "library sizes must be integers >= 2");
  }
  check(threads >= 0, "threads", "must be >= 0");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream s;
  s << "alloc_prior=" << csv::format(alloc_prior) << '\n'
    << "alloc_smoothing=" << csv::format(alloc_smoothing) << '\n'
    << "alloc_window=" << alloc_window << '\n'
    << "axis=" << axis << '\n'
    << "candidate_window=" << candidate_window << '\n'
    << "capacity=" << csv::format(capacity) << '\n'
    << "exploration_beta=" << csv::format(exploration_beta) << '\n'
    << "horizon=" << horizon << '\n'
    << "influence_floor=" << csv::format(influence_floor) << '\n'
    << "library_size=" << library_size << '\n'
    << "lifespan_max=" << lifespan_max << '\n'
    << "lifespan_min=" << lifespan_min << '\n'
    << "pareto_beta=" << csv::format(pareto_beta) << '\n'
    << "pareto_n_min=" << csv::format(pareto_n_min) << '\n'
    << "policies=" << join(policies) << '\n'
    << "requests_per_slot=" << requests_per_slot << '\n'
    << "seeds=" << join(seeds) << '\n'
    << "size_max=" << size_max << '\n'
    << "size_min=" << size_min << '\n'
    << "values=" << join(values) << '\n'
    << "w_snm=" << csv::format(w_snm) << '\n'
    << "weight_floor=" << csv::format(weight_floor) << '\n'
    << "zipf_delta=" << csv::format(zipf_delta) << '\n';
  return s.str();
}

std::string fnv1a64_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string ExperimentConfig::hash() const { return fnv1a64_hex(canonical()); }

Workload make_workload(const ExperimentConfig& config, std::uint64_t seed, std::optional<int> library_size) {
  CatalogConfig cc;
  cc.library_size = library_size.value_or(config.library_size);
  cc.w_snm = config.w_snm;
  cc.horizon = config.horizon;
  cc.size_min = config.size_min;
  cc.size_max = config.size_max;
  cc.lifespan_min = config.lifespan_min;
  cc.lifespan_max = config.lifespan_max;
  cc.pareto_beta = config.pareto_beta;
  cc.pareto_n_min = config.pareto_n_min;

  TraceConfig tc;
  tc.horizon = config.horizon;
  tc.requests_per_slot = config.requests_per_slot;
  tc.w_snm = config.w_snm;
  tc.zipf_delta = config.zipf_delta;

  Rng seeder(seed);
  const std::uint64_t catalog_seed = seeder.fork();
  const std::uint64_t trace_seed = seeder.fork();
  Catalog catalog = build_catalog(cc, catalog_seed);
  RequestTrace trace = generate_trace(catalog, tc, trace_seed);
  return {std::move(catalog), std::move(trace)};
}

AllocConfig alloc_config(const ExperimentConfig& config) {
  return {config.alloc_window, config.alloc_smoothing, config.alloc_prior};
}

PolicyConfig policy_config(const ExperimentConfig& config, std::uint64_t seed) {
  PolicyConfig pc;
  pc.exploration_beta = config.exploration_beta;
  pc.weight_floor = config.weight_floor;
  pc.influence_floor = config.influence_floor;
  pc.candidate_window = config.candidate_window;
  pc.seed = seed;
  return pc;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_values = config.values.size();
  const std::size_t n_seeds = config.seeds.size();
  const std::size_t n_policies = config.policies.size();
  std::vector<SweepRow> rows(n_values * n_policies * n_seeds);

  // One task per (value, seed): the workload is built once and shared
  // read-only by that task's policies.
  parallel_for(n_values * n_seeds, config.threads, [&](std::size_t task) {
    const std::size_t vi = task / n_seeds;
    const std::size_t si = task % n_seeds;
    const double value = config.values[vi];
    const std::uint64_t seed = config.seeds[si];
    const bool by_library = config.axis == "library_size";
    const Workload w = make_workload(config, seed, by_library ? std::optional<int>(int(value)) : std::nullopt);
    const double capacity = by_library ? config.capacity : value;
    for (std::size_t pi = 0; pi < n_policies; ++pi) {
      const RunMetrics m = run_simulation(w.catalog, w.trace, config.policies[pi], capacity, alloc_config(config),
                                          policy_config(config, seed));
      rows[(vi * n_policies + pi) * n_seeds + si] =
          SweepRow{config.axis, value, config.policies[pi], seed, m.summary.mean_hit_ratio, m.summary.final_regret};
    }
  });
  return rows;
}

void write_results_csv(const std::vector<SweepRow>& rows, const std::string& config_hash, const fs::path& path) {
  auto out = open_out(path);
  out << "# config_hash=" << config_hash << '\n' << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.axis << ',' << csv::format(r.value) << ',' << r.policy << ',' << r.seed << ','
        << csv::format(r.mean_hit_ratio) << ',' << csv::format(r.final_regret) << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<SweepRow> read_results_csv(const fs::path& path, std::string* config_hash) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      constexpr std::string_view tag = "# config_hash=";
      if (config_hash && body.substr(0, tag.size()) == tag) *config_hash = std::string(body.substr(tag.size()));
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!seen_header) {
      require(body == kResultsHeader, ErrorCode::ParseError, where + ": expected header `" + std::string(kResultsHeader) + "`");
      seen_header = true;
      continue;
    }
    const auto f = csv::split(body);
    SweepRow r;
    std::int64_t seed = 0;
    require(f.size() == 6, ErrorCode::ParseError, where + ": expected 6 fields");
    r.axis = std::string(csv::trim(f[0]));
    r.policy = std::string(csv::trim(f[2]));
    require(!r.axis.empty() && !r.policy.empty() && csv::parse(f[1], r.value) && csv::parse(f[3], seed) && seed >= 0 &&
                csv::parse(f[4], r.mean_hit_ratio) && csv::parse(f[5], r.final_regret),
            ErrorCode::ParseError, where + ": malformed row");
    r.seed = static_cast<std::uint64_t>(seed);
    rows.push_back(std::move(r));
  }
  require(!rows.empty(), ErrorCode::ParseError, path.string() + ": no result rows");
  return rows;
}

std::vector<ReportRow> summarize(const std::vector<SweepRow>& rows) {
  struct Group {
    std::vector<double> hit, regret;
  };
  // Ordered by (axis, value, first appearance of policy).
  std::vector<std::string> policy_order;
  std::map<std::tuple<std::string, double, std::size_t>, Group> groups;
  for (const auto& r : rows) {
    auto it = std::find(policy_order.begin(), policy_order.end(), r.policy);
    const std::size_t pi = static_cast<std::size_t>(it - policy_order.begin());
    if (it == policy_order.end()) policy_order.push_back(r.policy);
    auto& g = groups[{r.axis, r.value, pi}];
    g.hit.push_back(r.mean_hit_ratio);
    g.regret.push_back(r.final_regret);
  }

  std::vector<ReportRow> out;
  std::map<std::pair<std::string, double>, std::map<std::string, double>> means;
  for (const auto& [key, g] : groups) {
    const auto& [axis, value, pi] = key;
    ReportRow row{axis, value, policy_order[pi], g.hit.size(), mean_of(g.hit), stderr_of(g.hit), mean_of(g.regret),
                  stderr_of(g.regret), std::nullopt, std::nullopt};
    means[{axis, value}][row.policy] = row.mean_hit_ratio;
    out.push_back(std::move(row));
  }
  for (auto& row : out) {
    if (row.policy != "hybrid") continue;
    const auto& m = means[{row.axis, row.value}];
    auto gain = [&](const char* baseline) -> std::optional<double> {
      auto it = m.find(baseline);
      if (it == m.end() || it->second <= 0.0) return std::nullopt;
      return (row.mean_hit_ratio - it->second) / it->second;
    };
    row.improvement_vs_popular = gain("popular");
    row.improvement_vs_random = gain("random");
  }
  return out;
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::string& config_hash, const fs::path& path) {
  auto out = open_out(path);
  out << "# config_hash=" << config_hash << '\n' << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.axis << ',' << csv::format(r.value) << ',' << r.policy << ',' << r.n << ',' << csv::format(r.mean_hit_ratio)
        << ',' << csv::format(r.stderr_hit_ratio) << ',' << csv::format(r.mean_final_regret) << ','
        << csv::format(r.stderr_final_regret) << ',' << optional_field(r.improvement_vs_popular) << ','
        << optional_field(r.improvement_vs_random) << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

void print_report(const std::vector<ReportRow>& rows, std::ostream& out) {
  const auto flags = out.flags();
  out << std::left << std::setw(14) << "axis" << std::setw(8) << "value" << std::setw(9) << "policy" << std::right
      << std::setw(4) << "n" << std::setw(18) << "hit ratio" << std::setw(20) << "final regret" << std::setw(12)
      << "vs popular" << std::setw(12) << "vs random" << '\n';
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << (*v * 100.0) << '%';
    return s.str();
  };
  for (const auto& r : rows) {
    std::ostringstream hit, reg;
    hit << std::fixed << std::setprecision(4) << r.mean_hit_ratio << " +/- " << r.stderr_hit_ratio;
    reg << std::fixed << std::setprecision(2) << r.mean_final_regret << " +/- " << r.stderr_final_regret;
    out << std::left << std::setw(14) << r.axis << std::setw(8) << csv::format(r.value) << std::setw(9) << r.policy
        << std::right << std::setw(4) << r.n << std::setw(18) << hit.str() << std::setw(20) << reg.str()
        << std::setw(12) << pct(r.improvement_vs_popular) << std::setw(12) << pct(r.improvement_vs_random) << '\n';
  }
  out.flags(flags);
}

nlohmann::json to_json(const RunSummary& s) {
  return {{"policy", s.policy},
          {"seed", s.seed},
          {"config_hash", s.config_hash},
          {"capacity", s.capacity},
          {"mean_hit_ratio", s.mean_hit_ratio},
          {"mean_slot_hit_ratio", s.mean_slot_hit_ratio},
          {"final_regret", s.final_regret},
          {"total_requests", s.total_requests},
          {"total_hits", s.total_hits},
          {"fallback_requests", s.fallback_requests},
          {"cold_slots", s.cold_slots}};
}

nlohmann::json to_json(const PopularitySnapshot& snapshot) {
  nlohmann::json freq = nlohmann::json::object();
  for (const auto& [id, f] : snapshot.frequency) freq[std::to_string(id)] = f;
  return {{"slot", snapshot.slot}, {"frequency", freq}};
}

nlohmann::json to_json(const AllocationEstimate& alloc) { return {{"w_irm", alloc.w_irm}, {"w_snm", alloc.w_snm}}; }

void write_per_slot_header(std::ostream& out, const std::string& config_hash) {
  out << "# config_hash=" << config_hash << '\n'
      << "seed,policy,slot,requests,hits,hit_ratio,oracle_hit_ratio,regret_increment,cumulative_regret,w_snm\n";
}

void write_per_slot_rows(std::ostream& out, const RunMetrics& m) {
  for (int t = 0; t < m.horizon(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    out << m.summary.seed << ',' << m.summary.policy << ',' << (t + 1) << ',' << m.requests[i] << ',' << m.hits[i] << ','
        << csv::format(m.hit_ratio[t]) << ',' << csv::format(m.oracle_hit_ratio[t]) << ','
        << csv::format(m.regret_increment[t]) << ',' << csv::format(m.cumulative_regret[t]) << ','
        << csv::format(m.w_snm[t]) << '\n';
  }
}

std::vector<fs::path> cmd_generate(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir(config.out);
  ensure_dir(dir);
  const Workload w = make_workload(config, config.seeds.front());
  const fs::path catalog = dir / "catalog.csv";
  const fs::path trace = dir / "trace.csv";
  save_catalog(w.catalog, catalog);
  save_trace(w.trace, trace);
  return {catalog, trace};
}

std::vector<fs::path> cmd_run(const ExperimentConfig& config, const std::optional<fs::path>& catalog_path,
                              const std::optional<fs::path>& trace_path) {
  config.validate();
  require(catalog_path.has_value() == trace_path.has_value(), ErrorCode::ConfigError,
          "--catalog and --trace must be given together");
  const fs::path dir(config.out);
  ensure_dir(dir);
  const std::string hash = config.hash();

  std::optional<Workload> fixed;
  if (catalog_path) {
    Catalog catalog = load_catalog(*catalog_path);
    RequestTrace trace = load_trace(*trace_path, catalog, config.horizon);
    fixed = Workload{std::move(catalog), std::move(trace)};
  }

  nlohmann::json runs = nlohmann::json::array();
  std::vector<SweepRow> rows;
  const fs::path per_slot = dir / "per_slot.csv";
  auto slot_out = open_out(per_slot);
  write_per_slot_header(slot_out, hash);
  for (const auto& policy : config.policies) {
    for (std::uint64_t seed : config.seeds) {
      const Workload w = fixed ? *fixed : make_workload(config, seed);
      RunMetrics m =
          run_simulation(w.catalog, w.trace, policy, config.capacity, alloc_config(config), policy_config(config, seed));
      m.summary.config_hash = hash;
      runs.push_back(to_json(m.summary));
      write_per_slot_rows(slot_out, m);
      rows.push_back({"capacity", config.capacity, policy, seed, m.summary.mean_hit_ratio, m.summary.final_regret});
    }
  }
  require(static_cast<bool>(slot_out), ErrorCode::IoError, "write failed for " + per_slot.string());

  const fs::path metrics = dir / "metrics.json";
  auto json_out = open_out(metrics);
  json_out << nlohmann::json{{"config_hash", hash}, {"runs", runs}}.dump(2) << '\n';
  const fs::path results = dir / "results.csv";
  write_results_csv(rows, hash, results);
  return {metrics, per_slot, results};
}

std::vector<fs::path> cmd_sweep(const ExperimentConfig& config) {
  const auto rows = run_sweep(config);
  const fs::path dir(config.out);
  ensure_dir(dir);
  const fs::path results = dir / "results.csv";
  write_results_csv(rows, config.hash(), results);
  return {results};
}

std::vector<fs::path> cmd_report(const fs::path& results, const fs::path& out_dir, std::ostream& table) {
  std::string hash;
  const auto rows = read_results_csv(results, &hash);
  const auto report = summarize(rows);
  ensure_dir(out_dir);
  const fs::path path = out_dir / "report.csv";
  write_report_csv(report, hash, path);
  print_report(report, table);
  return {path};
}

}  // namespace edgecache
