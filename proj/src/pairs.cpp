#include "entropic/pairs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "entropic/parallel.hpp"

namespace entropic {

namespace fs = std::filesystem;

namespace {

struct MetaEntry {
  std::string id;
  std::optional<Direction> direction;  // empty: multivariate, skip
  double weight;
};

std::string pair_file_name(unsigned long id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pair%04lu.txt", id);
  return buf;
}

unsigned long parse_id(const std::string& token, const fs::path& meta, std::size_t line_no) {
  unsigned long id = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw DatasetError(DatasetError::Kind::bad_metadata,
                       meta.string() + ":" + std::to_string(line_no) + ": bad pair id '" + token + "'");
  return id;
}

std::vector<std::pair<unsigned long, MetaEntry>> read_metadata(const fs::path& dir) {
  const fs::path simple = dir / "pairs_meta.txt";
  const fs::path repo = dir / "pairmeta.txt";
  const bool use_simple = fs::exists(simple);
  if (!use_simple && !fs::exists(repo))
    throw DatasetError(DatasetError::Kind::missing_metadata,
                       "no pairs_meta.txt or pairmeta.txt in " + dir.string());
  const fs::path meta = use_simple ? simple : repo;
  std::ifstream in(meta);
  if (!in) throw DatasetError(DatasetError::Kind::missing_metadata, "cannot open " + meta.string());

  std::vector<std::pair<unsigned long, MetaEntry>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty() || tok.front().starts_with('#')) continue;
    auto bad = [&](const std::string& why) {
      return DatasetError(DatasetError::Kind::bad_metadata,
                          meta.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    MetaEntry e{tok[0], std::nullopt, 1.0};
    try {
      if (use_simple) {
        if (tok.size() != 3) throw bad("expected 'id dir weight'");
        if (tok[1] == "->") {
          e.direction = Direction::x_to_y;
        } else if (tok[1] == "<-") {
          e.direction = Direction::y_to_x;
        } else {
          throw bad("direction must be '->' or '<-'");
        }
        e.weight = std::stod(tok[2]);
      } else {
        if (tok.size() != 6) throw bad("expected 'id cause_first cause_last effect_first effect_last weight'");
        const int c0 = std::stoi(tok[1]), c1 = std::stoi(tok[2]), e0 = std::stoi(tok[3]), e1 = std::stoi(tok[4]);
        if (c0 == 1 && c1 == 1 && e0 == 2 && e1 == 2) e.direction = Direction::x_to_y;
        if (c0 == 2 && c1 == 2 && e0 == 1 && e1 == 1) e.direction = Direction::y_to_x;
        e.weight = std::stod(tok[5]);
      }
    } catch (const std::logic_error&) {
      throw bad("unparsable number");
    }
    if (!(e.weight > 0.0)) throw bad("weight must be > 0");
    out.emplace_back(parse_id(tok[0], meta, line_no), std::move(e));
  }
  return out;
}

// Returns the parsed rows and the column count of the file.
std::pair<std::vector<std::vector<double>>, std::size_t> read_columns(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DatasetError(DatasetError::Kind::missing_pair_file, "cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw DatasetError(DatasetError::Kind::unparsable_row,
                           file.string() + ":" + std::to_string(line_no) + ": not a number '" + tok + "'");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw DatasetError(DatasetError::Kind::unparsable_row,
                         file.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return {std::move(rows), width};
}

std::vector<std::uint32_t> bin_axis(const std::vector<double>& v, std::size_t n) {
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, range = *hi_it - *lo_it;
  std::vector<std::uint32_t> out(v.size(), 0);
  if (!(range > 0.0)) return out;
  const double scale = static_cast<double>(n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double b = std::floor((v[i] - lo) / range * scale);
    out[i] = static_cast<std::uint32_t>(std::min(b, scale - 1.0));
  }
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

PairDataset load_pairs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DatasetError(DatasetError::Kind::empty_directory, dir.string() + " is not a directory");
  bool any_pair_file = false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("pair") && name.ends_with(".txt") && name != "pairmeta.txt" && name != "pairs_meta.txt") {
      any_pair_file = true;
      break;
    }
  }
  if (!any_pair_file) throw DatasetError(DatasetError::Kind::empty_directory, "no pair files in " + dir.string());

  PairDataset ds;
  for (auto& [id, meta] : read_metadata(dir)) {
    const fs::path file = dir / pair_file_name(id);
    if (!fs::exists(file))
      throw DatasetError(DatasetError::Kind::missing_pair_file,
                         "pair " + meta.id + ": missing file " + file.filename().string());
    if (!meta.direction) {
      ds.warnings.push_back("pair " + meta.id + ": multivariate metadata, skipped");
      continue;
    }
    auto [rows, width] = read_columns(file);
    if (width > 2) {
      ds.warnings.push_back("pair " + meta.id + ": " + std::to_string(width) + " columns, skipped");
      continue;
    }
    if (width < 2) {
      throw DatasetError(DatasetError::Kind::unparsable_row, file.string() + ": needs two columns");
    }
    if (rows.size() < kMinPairSamples) {
      ds.warnings.push_back("pair " + meta.id + ": only " + std::to_string(rows.size()) + " samples, skipped");
      continue;
    }
    CausePair pair{meta.id, {}, *meta.direction, meta.weight};
    pair.samples.reserve(rows.size());
    for (const auto& r : rows) pair.samples.emplace_back(r[0], r[1]);
    ds.pairs.push_back(std::move(pair));
  }
  return ds;
}

QuantizedPairs quantize_pair(const std::vector<std::pair<double, double>>& samples,
                             std::optional<std::size_t> n_override) {
  const std::size_t count = samples.size();
  if (count < kMinPairSamples)
    throw ValidationError("quantize_pair: need at least " + std::to_string(kMinPairSamples) + " samples, got " +
                          std::to_string(count));
  if (n_override && *n_override < 1) throw ValidationError("quantize_pair: n must be >= 1");
  const std::size_t n = n_override.value_or(std::max<std::size_t>(2, std::min(count / 10, kMaxQuantizationLevels)));
  std::vector<double> xs(count), ys(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = samples[i].first;
    ys[i] = samples[i].second;
  }
  const auto bx = bin_axis(xs, n);
  const auto by = bin_axis(ys, n);
  QuantizedPairs q{{}, n};
  q.states.reserve(count);
  for (std::size_t i = 0; i < count; ++i) q.states.emplace_back(bx[i], by[i]);
  return q;
}

JointMatrix empirical_joint(const QuantizedPairs& q) {
  if (q.states.empty()) throw ValidationError("empirical_joint: no samples");
  Matrix counts(q.n, q.n);
  for (const auto& [x, y] : q.states) {
    if (x >= q.n || y >= q.n) throw ValidationError("empirical_joint: state out of range");
    counts(y, x) += 1.0;
  }
  const double total = static_cast<double>(q.states.size());
  std::vector<double> cells(counts.cells().begin(), counts.cells().end());
  for (double& c : cells) c /= total;
  return JointMatrix(Matrix(q.n, q.n, std::move(cells)));
}

EvalCurve evaluate_dataset(const PairDataset& ds, const std::vector<double>& t_grid, double alpha, unsigned jobs) {
  if (ds.pairs.empty()) throw DatasetError(DatasetError::Kind::empty_dataset, "evaluate_dataset: no pairs");
  if (t_grid.empty()) throw ValidationError("evaluate_dataset: empty threshold grid");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()) || t_grid.front() < 0.0)
    throw ValidationError("evaluate_dataset: thresholds must be ascending and >= 0");

  std::vector<DirectionVerdict> verdicts(ds.pairs.size());
  parallel_for(ds.pairs.size(), jobs, [&](std::size_t i) {
    verdicts[i] = infer_direction(empirical_joint(quantize_pair(ds.pairs[i].samples)), 0.0);
  });

  double total_weight = 0.0;
  for (const auto& p : ds.pairs) total_weight += p.weight;

  EvalCurve curve;
  for (double t : t_grid) {
    double w_decided = 0.0, w_correct = 0.0;
    std::size_t decided = 0, correct = 0;
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
      const auto v = apply_threshold(verdicts[i], t);
      if (v.decision == Direction::undecided) continue;
      const bool ok = v.decision == ds.pairs[i].ground_truth;
      ++decided;
      w_decided += ds.pairs[i].weight;
      if (ok) {
        ++correct;
        w_correct += ds.pairs[i].weight;
      }
    }
    EvalPoint pt{t, w_decided / total_weight, std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, decided};
    if (decided > 0) {
      pt.accuracy = w_correct / w_decided;
      pt.accuracy_unweighted = static_cast<double>(correct) / static_cast<double>(decided);
      std::tie(pt.ci_low, pt.ci_high) = clopper_pearson(correct, decided, alpha);
    }
    curve.points.push_back(pt);
  }
  return curve;
}

void write_eval_csv(std::ostream& out, const EvalCurve& curve) {
  out << "t,decision_rate,accuracy,ci_low,ci_high,n_decided,accuracy_unweighted\n";
  for (const auto& p : curve.points)
    out << fmt(p.t) << ',' << fmt(p.decision_rate) << ',' << fmt(p.accuracy) << ',' << fmt(p.ci_low) << ','
        << fmt(p.ci_high) << ',' << p.n_decided << ',' << fmt(p.accuracy_unweighted) << '\n';
}

}  // namespace entropic
