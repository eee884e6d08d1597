#include "entropic/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entropic/errors.hpp"

namespace entropic {

namespace {

void check_mass(double m, const char* what) {
  if (!std::isfinite(m) || m < 0.0) {
    throw ValidationError(std::string(what) + ": mass must be finite and nonnegative, got " +
                          std::to_string(m));
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Normalize by a positive total. Cells that were exactly zero stay zero.
std::vector<double> normalized(std::vector<double> v, double total) {
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

Distribution::Distribution(std::vector<double> masses, std::vector<std::string> labels)
    : masses_(std::move(masses)), labels_(std::move(labels)) {
  if (masses_.empty()) throw ValidationError("distribution: needs at least one state");
  if (!labels_.empty() && labels_.size() != masses_.size()) {
    throw ValidationError("distribution: label count does not match state count");
  }
  double total = 0.0;
  for (double m : masses_) {
    check_mass(m, "distribution");
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ValidationError("distribution: masses sum to " + std::to_string(total) + ", expected 1");
  }
}

Distribution Distribution::point_mass(std::size_t size, std::size_t state) {
  if (state >= size) throw ValidationError("point_mass: state out of range");
  std::vector<double> m(size, 0.0);
  m[state] = 1.0;
  return Distribution(std::move(m));
}

Distribution Distribution::uniform(std::size_t size) {
  if (size == 0) throw ValidationError("uniform: needs at least one state");
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

std::size_t Distribution::support_size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(masses_.begin(), masses_.end(), [](double m) { return m > kZeroTolerance; }));
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (cells_.size() != rows_ * cols_) throw ValidationError("matrix: cell count does not match shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ValidationError("matrix: empty");
  const std::size_t cols = rows.front().size();
  std::vector<double> cells;
  cells.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ValidationError("matrix: ragged rows");
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(cells));
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c);
  return out;
}

std::vector<double> Matrix::col_sums() const {
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[c] += (*this)(r, c);
  return out;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

JointMatrix::JointMatrix(Matrix cells, std::vector<std::string> row_labels,
                         std::vector<std::string> col_labels)
    : cells_(std::move(cells)), row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  if (cells_.rows() == 0 || cells_.cols() == 0) throw ValidationError("joint: empty matrix");
  if (!row_labels_.empty() && row_labels_.size() != cells_.rows())
    throw ValidationError("joint: row label count mismatch");
  if (!col_labels_.empty() && col_labels_.size() != cells_.cols())
    throw ValidationError("joint: column label count mismatch");
  double total = 0.0;
  for (double m : cells_.cells()) {
    check_mass(m, "joint");
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ValidationError("joint: cells sum to " + std::to_string(total) + ", expected 1");
  }
}

JointMatrix JointMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  return JointMatrix(Matrix::from_rows(rows));
}

ConditionalMatrix::ConditionalMatrix(Matrix cells) : cells_(std::move(cells)) {
  if (cells_.rows() == 0 || cells_.cols() == 0) throw ValidationError("conditional: empty matrix");
  degenerate_.assign(cells_.cols(), false);
  for (double m : cells_.cells()) check_mass(m, "conditional");
  const auto sums = cells_.col_sums();
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (sums[c] == 0.0) {
      degenerate_[c] = true;
    } else if (std::abs(sums[c] - 1.0) > kSumTolerance) {
      throw ValidationError("conditional: column " + std::to_string(c) + " sums to " +
                            std::to_string(sums[c]) + ", expected 1");
    }
  }
}

ConditionalMatrix ConditionalMatrix::from_columns(const std::vector<std::vector<double>>& columns) {
  return ConditionalMatrix(Matrix::from_rows(columns).transposed());
}

double shannon_entropy(std::span<const double> masses) {
  double acc = 0.0;
  for (double p : masses) acc -= plogp(p);
  return acc > 0.0 ? acc : 0.0;
}

double shannon_entropy(const Distribution& d) { return shannon_entropy(d.masses()); }

double renyi_entropy(const Distribution& d, double order) {
  if (!(order >= 0.0)) throw ValidationError("renyi_entropy: order must be >= 0");
  if (order == 1.0) throw ValidationError("renyi_entropy: order 1 is Shannon entropy; use shannon_entropy");
  if (order == 0.0) return std::log2(static_cast<double>(d.support_size()));
  double acc = 0.0;
  for (double p : d.masses())
    if (p > 0.0) acc += std::pow(p, order);
  const double h = std::log2(acc) / (1.0 - order);
  return h > 0.0 ? h : 0.0;
}

BayesSplit conditionals_from_joint(const JointMatrix& joint) {
  const Matrix& j = joint.cells();
  const std::size_t ny = j.rows();
  const std::size_t nx = j.cols();
  const auto px = j.col_sums();
  const auto py = j.row_sums();

  Matrix y_given_x(ny, nx);
  for (std::size_t x = 0; x < nx; ++x) {
    if (px[x] <= kZeroTolerance) continue;
    const auto col = normalized(j.column(x), px[x]);
    for (std::size_t y = 0; y < ny; ++y) y_given_x(y, x) = col[y];
  }
  Matrix x_given_y(nx, ny);
  for (std::size_t y = 0; y < ny; ++y) {
    if (py[y] <= kZeroTolerance) continue;
    for (std::size_t x = 0; x < nx; ++x) x_given_y(x, y) = j(y, x) / py[y];
  }

  const double tx = std::accumulate(px.begin(), px.end(), 0.0);
  const double ty = std::accumulate(py.begin(), py.end(), 0.0);
  return BayesSplit{ConditionalMatrix(std::move(y_given_x)), ConditionalMatrix(std::move(x_given_y)),
                    Distribution(normalized(px, tx), joint.col_labels()),
                    Distribution(normalized(py, ty), joint.row_labels())};
}

}  // namespace entropic
