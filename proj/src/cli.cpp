#include "entropic/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "entropic/coupling.hpp"
#include "entropic/errors.hpp"
#include "entropic/inference.hpp"
#include "entropic/pairs.hpp"
#include "entropic/parallel.hpp"
#include "entropic/rng.hpp"
#include "entropic/synth.hpp"
#include "entropic/version.hpp"

namespace entropic::cli {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double to_real(std::string_view s) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("not a number: '" + std::string(s) + "'");
  }
}

std::size_t to_count(std::string_view s) {
  const double v = to_real(s);
  if (v < 0.0 || v != std::floor(v)) throw ValidationError("not a nonnegative integer: '" + std::string(s) + "'");
  return static_cast<std::size_t>(v);
}

// Reads whitespace-separated numeric rows, skipping blank lines. Each row
// keeps its 1-based line number for error messages.
std::vector<std::pair<std::size_t, std::vector<double>>> read_numeric_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<double> row;
    for (std::string tok; ss >> tok;) {
      try {
        row.push_back(to_real(tok));
      } catch (const ValidationError& e) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (!row.empty()) rows.emplace_back(line_no, std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");
  return rows;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot write " + path);
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

struct Manifest {
  Manifest(std::string cmd, json params, std::optional<std::uint64_t> s = std::nullopt)
      : command(std::move(cmd)), parameters(std::move(params)), seed(s) {}

  std::string command;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& out_path, std::ostream& err) const {
    json j{{"command", command},
           {"parameters", parameters},
           {"version", std::string(kVersion)},
           {"rng", std::string(Rng::kName)},
           {"outputs", outputs},
           {"duration_seconds",
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    j["seed"] = seed ? json(*seed) : json(nullptr);
    if (out_path.empty()) {
      err << "manifest " << j.dump() << '\n';
      return;
    }
    std::ofstream f(out_path + ".manifest.json");
    if (!f) throw IoError("cannot write " + out_path + ".manifest.json");
    f << j.dump(2) << '\n';
  }
};

json verdict_json(const DirectionVerdict& v) {
  return json{{"score_xy_bits", v.score_xy_bits}, {"score_yx_bits", v.score_yx_bits},
              {"gap_bits", v.gap_bits},           {"n_states", v.n_states},
              {"threshold_t", v.threshold_t},     {"decision", std::string(to_string(v.decision))},
              {"degenerate", v.degenerate}};
}

struct Options {
  std::string in;
  std::string out;
  std::string n = "2";
  std::string sigma = "2:8";
  std::string t_grid = "0";
  std::string path;
  std::optional<std::size_t> theta;
  std::optional<double> cap_bits;
  double t = 0.0;
  double alpha = 0.05;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned jobs = default_jobs();
};

int cmd_couple(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest m{"couple", {{"in", o.in}}};
  std::vector<Distribution> marginals;
  for (auto& [line_no, row] : read_numeric_rows(o.in)) {
    try {
      marginals.emplace_back(std::move(row));
    } catch (const ValidationError& e) {
      throw ValidationError(o.in + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  const auto result = greedy_coupling(marginals);
  if (!o.out.empty()) {
    Output atoms(o.out, out);
    write_coupling(atoms.stream(), result.coupling);
    m.outputs.push_back(o.out);
  }
  out << json{{"entropy_bits", result.entropy_bits},
              {"lower_bound_bits", result.lower_bound_bits},
              {"excess_bits", result.excess_bits},
              {"atoms", result.coupling.atom_count()}}
             .dump()
      << '\n';
  m.emit(o.out, err);
  return kOk;
}

int cmd_infer(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest m{"infer", {{"in", o.in}, {"t", o.t}}};
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (auto& [line_no, row] : read_numeric_rows(o.in)) {
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw ValidationError(o.in + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) + " cells");
    rows.push_back(std::move(row));
  }
  const auto joint = JointMatrix::from_rows(rows);
  const auto verdict = infer_direction(joint, o.t);
  const auto h0 = h0_scores(joint);
  auto j = verdict_json(verdict);
  j["h0_xy_bits"] = h0.h0_xy_bits;
  j["h0_yx_bits"] = h0.h0_yx_bits;
  Output dest(o.out, out);
  dest.stream() << j.dump() << '\n';
  if (!o.out.empty()) m.outputs.push_back(o.out);
  m.emit(o.out, err);
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest m{"synth-identifiability",
             {{"n", o.n}, {"sigma", o.sigma}, {"trials", o.trials}, {"jobs", o.jobs}},
             o.seed};
  if (o.theta) m.parameters["theta"] = *o.theta;
  if (o.cap_bits) m.parameters["cap_bits"] = *o.cap_bits;
  const auto sigmas = parse_real_grid(o.sigma);
  std::vector<IdentifiabilitySummary> rows;
  for (std::size_t n : parse_int_range(o.n)) {
    auto cfg = SynthConfig::defaults_for(n);
    cfg.sigmas = sigmas;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    if (o.theta) cfg.theta = *o.theta;
    if (o.cap_bits) cfg.entropy_cap_bits = *o.cap_bits;
    rows.push_back(run_identifiability_experiment(cfg));
  }
  {
    Output dest(o.out, out);
    write_identifiability_csv(dest.stream(), rows);
  }
  if (!o.out.empty()) m.outputs.push_back(o.out);
  m.emit(o.out, err);
  for (const auto& r : rows) {
    for (const auto& s : r.per_sigma) {
      if (s.starved) {
        err << "error code=" << kStarvation << " kind=starvation message=\"n=" << r.n << " sigma=" << s.sigma
            << " exhausted the rejection budget\"\n";
        return kStarvation;
      }
    }
  }
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest m{"greedy-bench", {{"n", o.n}, {"trials", o.trials}, {"jobs", o.jobs}}, o.seed};
  const auto rows = run_greedy_benchmark(parse_int_range(o.n), o.trials, o.seed, o.jobs);
  {
    Output dest(o.out, out);
    write_benchmark_csv(dest.stream(), rows);
  }
  if (!o.out.empty()) m.outputs.push_back(o.out);
  m.emit(o.out, err);
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest m{"eval-pairs", {{"path", o.path}, {"t", o.t_grid}, {"alpha", o.alpha}, {"jobs", o.jobs}}};
  const auto ds = load_pairs(o.path);
  for (const auto& w : ds.warnings) err << "warning " << w << '\n';
  const auto curve = evaluate_dataset(ds, parse_real_grid(o.t_grid), o.alpha, o.jobs);
  {
    Output dest(o.out, out);
    write_eval_csv(dest.stream(), curve);
  }
  if (!o.out.empty()) m.outputs.push_back(o.out);
  m.emit(o.out, err);
  return kOk;
}

std::string quoted(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return '"' + s + '"';
}

int fail(std::ostream& err, int code, std::string_view kind, const std::string& message) {
  err << "error code=" << code << " kind=" << kind << " message=" << quoted(message) << '\n';
  return code;
}

}  // namespace

std::vector<std::size_t> parse_int_range(std::string_view text) {
  std::vector<std::size_t> out;
  if (text.find(',') != std::string_view::npos) {
    for (auto part : split(text, ',')) out.push_back(to_count(part));
    return out;
  }
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {to_count(parts[0])};
  if (parts.size() != 2) throw ValidationError("integer range must be 'a:b': '" + std::string(text) + "'");
  const std::size_t a = to_count(parts[0]), b = to_count(parts[1]);
  if (a > b) throw ValidationError("empty integer range '" + std::string(text) + "'");
  for (std::size_t v = a; v <= b; ++v) out.push_back(v);
  return out;
}

std::vector<double> parse_real_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(',') != std::string_view::npos) {
    for (auto part : split(text, ',')) out.push_back(to_real(part));
    return out;
  }
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {to_real(parts[0])};
  if (parts.size() > 3) throw ValidationError("grid must be 'a:b' or 'a:b:step': '" + std::string(text) + "'");
  const double a = to_real(parts[0]), b = to_real(parts[1]);
  const double step = parts.size() == 3 ? to_real(parts[2]) : 1.0;
  if (!(step > 0.0) || a > b) throw ValidationError("bad grid '" + std::string(text) + "'");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropic causal inference between two discrete variables", "entropic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;
  if (const char* env = std::getenv("ENTROPIC_CI_ALPHA")) {
    try {
      o.alpha = to_real(env);
    } catch (const ValidationError& e) {
      return fail(err, kValidation, "validation", std::string("ENTROPIC_CI_ALPHA: ") + e.what());
    }
  }

  auto* couple = app.add_subcommand("couple", "Greedy minimum-entropy coupling of the marginals in a file");
  couple->add_option("marginals", o.in, "One marginal per line, whitespace-separated masses")->required();
  couple->add_option("--out", o.out, "Atom file to write");

  auto* infer = app.add_subcommand("infer", "Direction test on a joint distribution file (rows Y, columns X)");
  infer->add_option("joint", o.in, "Joint matrix file")->required();
  infer->add_option("--t", o.t, "Decision threshold t (gap must exceed t*log2 n)");
  infer->add_option("--out", o.out, "Verdict JSON file");

  auto* synth = app.add_subcommand("synth-identifiability", "Identifiability success rate on synthetic models");
  synth->add_option("--n", o.n, "State count(s): n, a:b or a,b,c");
  synth->add_option("--theta", o.theta, "States of E (default n(n-1))");
  synth->add_option("--sigma", o.sigma, "Log-normal sigma grid");
  synth->add_option("--trials", o.trials, "Kept trials per sigma");
  synth->add_option("--cap-bits", o.cap_bits, "Keep only H(E) <= cap (default log2 n)");

  auto* bench = app.add_subcommand("greedy-bench", "Excess entropy of greedy coupling over max marginal entropy");
  bench->alias("greedy_bench");
  bench->add_option("--n", o.n, "State count(s): n, a:b or a,b,c");
  bench->add_option("--trials", o.trials, "Trials per n");

  auto* eval = app.add_subcommand("eval-pairs", "Accuracy vs decision rate on a cause-effect pair directory");
  eval->add_option("--path", o.path, "Pair directory")->required();
  eval->add_option("--t", o.t_grid, "Threshold grid, e.g. 0:0.5:0.05");
  eval->add_option("--alpha", o.alpha, "Confidence interval level (default 0.05 or ENTROPIC_CI_ALPHA)");

  for (auto* sub : {synth, bench}) {
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--out", o.out, "CSV output file");
  }
  for (auto* sub : {synth, bench, eval}) sub->add_option("--jobs", o.jobs, "Worker threads");
  eval->add_option("--out", o.out, "CSV output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kValidation, "usage", e.what());
  }

  try {
    if (o.jobs == 0) throw ValidationError("--jobs must be >= 1");
    if (*couple) return cmd_couple(o, out, err);
    if (*infer) return cmd_infer(o, out, err);
    if (*synth) return cmd_synth(o, out, err);
    if (*bench) return cmd_bench(o, out, err);
    return cmd_eval(o, out, err);
  } catch (const ValidationError& e) {
    return fail(err, kValidation, "validation", e.what());
  } catch (const StarvationError& e) {
    return fail(err, kStarvation, "starvation", e.what());
  } catch (const IoError& e) {
    return fail(err, kIo, "io", e.what());
  }
}

}  // namespace entropic::cli
