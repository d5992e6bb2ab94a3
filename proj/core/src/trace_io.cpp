#include "pigp/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pigp {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: no \r\n translation
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string_view> split_csv(std::string_view line,
                                        std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("malformed integer field: " + std::string(s));
  return v;
}

// Token-oriented manifest reader: `key value...` lines, '#' starts a comment.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string tok;
    while (in_ >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("problem manifest: unexpected end of input");
  }

  void expect(std::string_view key) {
    const std::string tok = next();
    if (tok != key)
      throw std::runtime_error("problem manifest: expected '" +
                               std::string(key) + "', got '" + tok + "'");
  }

  double number() { return parse_double(next()); }
  std::int64_t integer() { return parse_int(next()); }

 private:
  std::istream& in_;
};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf, ptr};
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("malformed numeric field: " + std::string(s));
  return v;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace,
                     bool freeze_timing) {
  out << 't';
  for (int k = 0; k < trace.dim; ++k) out << ",x" << k;
  out << ",y,regret,ucb,element_id,n_splits,wall_clock_s\n";
  for (const StepRecord& r : trace.steps) {
    if (static_cast<int>(r.x.size()) != trace.dim)
      throw std::runtime_error("write_trace_csv: coordinate arity mismatch");
    out << r.t;
    for (double c : r.x) out << ',' << format_double(c);
    out << ',' << format_double(r.y) << ',' << format_double(r.regret) << ','
        << format_double(r.ucb) << ',' << r.element_id << ',' << r.n_splits
        << ',' << format_double(freeze_timing ? 0.0 : r.wall_clock_s) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace,
                     bool freeze_timing) {
  auto out = open_out(path);
  write_trace_csv(out, trace, freeze_timing);
}

RunTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_trace_csv: empty input");
  std::vector<std::string_view> cells;
  split_csv(line, cells);
  if (cells.size() < 8 || cells.front() != "t" || cells.back() != "wall_clock_s")
    throw std::runtime_error("read_trace_csv: unrecognized header");
  const int dim = static_cast<int>(cells.size()) - 7;

  RunTrace trace;
  trace.dim = dim;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    split_csv(line, cells);
    if (cells.size() != static_cast<std::size_t>(dim) + 7)
      throw std::runtime_error("read_trace_csv: bad row arity");
    StepRecord r;
    r.t = static_cast<int>(parse_int(cells[0]));
    r.x.reserve(dim);
    for (int k = 0; k < dim; ++k) r.x.push_back(parse_double(cells[1 + k]));
    r.y = parse_double(cells[dim + 1]);
    r.regret = parse_double(cells[dim + 2]);
    r.ucb = parse_double(cells[dim + 3]);
    r.element_id = parse_int(cells[dim + 4]);
    r.n_splits = static_cast<int>(parse_int(cells[dim + 5]));
    r.wall_clock_s = parse_double(cells[dim + 6]);
    trace.steps.push_back(std::move(r));
  }
  return trace;
}

RunTrace read_trace_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_trace_csv(in);
}

void write_cover_snapshot(std::ostream& out,
                          std::span<const Hypercube> cover) {
  const int dim = cover.empty() ? 0 : cover.front().dim;
  out << "# cover count=" << cover.size() << " dim=" << dim << '\n';
  out << "# id level created_at rho lower...\n";
  for (const Hypercube& c : cover) {
    out << c.id << ' ' << c.level << ' ' << c.created_at << ' '
        << format_double(c.rho());
    for (int k = 0; k < c.dim; ++k) out << ' ' << format_double(c.lower(k));
    out << '\n';
  }
}

void write_cover_snapshot(const std::filesystem::path& path,
                          std::span<const Hypercube> cover) {
  auto out = open_out(path);
  write_cover_snapshot(out, cover);
}

void write_problem_manifest(std::ostream& out, const Problem& problem) {
  out << "# bandit instance\n";
  out << "name " << problem.name() << '\n';
  out << "dim " << problem.dim() << '\n';
  out << "per_axis " << problem.grid_per_axis() << '\n';
  out << "noise_half_width " << format_double(problem.noise().half_width)
      << '\n';
  if (problem.source()) {
    const SyntheticRkhsFunction& f = *problem.source();
    out << "kind expansion\n";
    out << "kernel_nu " << format_double(f.kernel.nu) << '\n';
    out << "kernel_ell " << format_double(f.kernel.ell) << '\n';
    out << "norm " << format_double(f.norm) << '\n';
    out << "centers " << f.centers.size() << '\n';
    for (std::size_t i = 0; i < f.centers.size(); ++i) {
      const auto c = f.centers[i];
      for (std::size_t k = 0; k < c.size(); ++k)
        out << (k ? " " : "") << format_double(c[k]);
      out << '\n';
    }
    out << "coeffs " << f.coeffs.size() << '\n';
    for (double a : f.coeffs) out << format_double(a) << '\n';
  } else {
    out << "kind rewards\n";
    out << "rewards " << problem.arm_count() << '\n';
    for (std::size_t i = 0; i < problem.arm_count(); ++i)
      out << format_double(problem.reward(i)) << '\n';
  }
}

void write_problem_manifest(const std::filesystem::path& path,
                            const Problem& problem) {
  auto out = open_out(path);
  write_problem_manifest(out, problem);
}

Problem read_problem_manifest(std::istream& in) {
  TokenReader r(in);
  r.expect("name");
  const std::string name = r.next();
  r.expect("dim");
  const int dim = static_cast<int>(r.integer());
  r.expect("per_axis");
  const int per_axis = static_cast<int>(r.integer());
  r.expect("noise_half_width");
  const double noise = r.number();
  r.expect("kind");
  const std::string kind = r.next();

  if (kind == "expansion") {
    r.expect("kernel_nu");
    const double nu = r.number();
    r.expect("kernel_ell");
    const double ell = r.number();
    r.expect("norm");
    const double norm = r.number();
    r.expect("centers");
    const auto m = static_cast<std::size_t>(r.integer());
    PointSet centers(dim);
    std::vector<double> point(dim);
    for (std::size_t i = 0; i < m; ++i) {
      for (int k = 0; k < dim; ++k) point[k] = r.number();
      centers.push_back(point);
    }
    r.expect("coeffs");
    if (static_cast<std::size_t>(r.integer()) != m)
      throw std::runtime_error("problem manifest: coeff/center count mismatch");
    std::vector<double> coeffs(m);
    for (std::size_t i = 0; i < m; ++i) coeffs[i] = r.number();
    SyntheticRkhsFunction f{KernelSpec(nu, ell, dim), std::move(centers),
                            std::move(coeffs), norm};
    return Problem::from_function(name, std::move(f), per_axis, noise);
  }
  if (kind == "rewards") {
    r.expect("rewards");
    const auto n = static_cast<std::size_t>(r.integer());
    std::vector<double> rewards(n);
    for (std::size_t i = 0; i < n; ++i) rewards[i] = r.number();
    return Problem::from_rewards(name, make_grid(dim, per_axis), per_axis,
                                 std::move(rewards), noise);
  }
  throw std::runtime_error("problem manifest: unknown kind '" + kind + "'");
}

Problem read_problem_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_problem_manifest(in);
}

SeedOutcome summarize_trace(std::uint64_t seed, const RunTrace& trace) {
  SeedOutcome s;
  s.seed = seed;
  s.total_regret = trace.total_regret();
  s.max_gamma = trace.max_element_gamma;
  s.final_cover = static_cast<std::int64_t>(trace.final_cover.size());
  s.cumulative_elements = trace.cumulative_elements.empty()
                              ? static_cast<std::int64_t>(trace.initial_cover_size)
                              : trace.cumulative_elements.back();
  s.capacity_violations = trace.capacity_violations;
  s.confidence_pairs = static_cast<std::int64_t>(trace.confidence_pairs);
  s.confidence_violations =
      static_cast<std::int64_t>(trace.confidence_violations);
  s.jitter_events = trace.jitter_events;
  for (const StepRecord& r : trace.steps) s.wall_clock_s += r.wall_clock_s;
  return s;
}

FractionStat regret_fraction(double algo_regret, double reference_regret) {
  if (!(reference_regret > 0.0)) return {0.0, false};
  return {algo_regret / reference_regret, true};
}

void write_summary_json(std::ostream& out, const RunSummary& summary) {
  nlohmann::ordered_json j;
  j["problem"] = summary.problem;
  j["dim"] = summary.dim;
  j["horizon"] = summary.horizon;
  j["grid_per_axis"] = summary.grid_per_axis;
  j["nu"] = summary.nu;
  j["ell"] = summary.ell;
  j["delta"] = summary.delta;
  j["alpha"] = summary.alpha;
  j["noise_half_width"] = summary.noise_half_width;
  j["rkhs_norm_bound"] = summary.rkhs_norm_bound;
  j["reference_algorithm"] = summary.reference_algorithm;
  j["algorithms"] = nlohmann::ordered_json::array();
  for (const AlgoSummary& a : summary.algos) {
    nlohmann::ordered_json ja;
    ja["algorithm"] = a.algorithm;
    ja["median_regret"] = a.median_regret;
    if (a.median_fraction.defined)
      ja["median_fraction_vs_reference"] = a.median_fraction.value;
    else
      ja["median_fraction_vs_reference"] = nullptr;
    ja["seeds"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < a.seeds.size(); ++i) {
      const SeedOutcome& s = a.seeds[i];
      nlohmann::ordered_json js;
      js["seed"] = s.seed;
      js["failed"] = s.failed;
      if (s.failed) js["error"] = s.error;
      js["total_regret"] = s.total_regret;
      js["max_gamma"] = s.max_gamma;
      js["final_cover"] = s.final_cover;
      js["cumulative_elements"] = s.cumulative_elements;
      js["capacity_violations"] = s.capacity_violations;
      js["confidence_pairs"] = s.confidence_pairs;
      js["confidence_violations"] = s.confidence_violations;
      js["jitter_events"] = s.jitter_events;
      js["wall_clock_s"] = s.wall_clock_s;
      if (i < a.fraction_vs_reference.size()) {
        const FractionStat& f = a.fraction_vs_reference[i];
        if (f.defined)
          js["fraction_vs_reference"] = f.value;
        else
          js["fraction_vs_reference"] = nullptr;
      }
      ja["seeds"].push_back(std::move(js));
    }
    j["algorithms"].push_back(std::move(ja));
  }
  out << j.dump(2) << '\n';
}

void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary) {
  auto out = open_out(path);
  write_summary_json(out, summary);
}

}  // namespace pigp
