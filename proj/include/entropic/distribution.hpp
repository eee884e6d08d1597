#pragma once

// Probability vectors, joint and conditional matrices, and the entropy
// functionals shared by every other module. All logarithms are base 2.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace entropic {

// Stochasticity tolerance applied at construction.
inline constexpr double kSumTolerance = 1e-9;
// Masses at or below this count as absent when measuring support.
inline constexpr double kZeroTolerance = 1e-12;

/// A finite probability vector over labeled states.
class Distribution {
 public:
  explicit Distribution(std::vector<double> masses, std::vector<std::string> labels = {});

  static Distribution point_mass(std::size_t size, std::size_t state);
  static Distribution uniform(std::size_t size);

  [[nodiscard]] std::size_t size() const noexcept { return masses_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return masses_[i]; }
  [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] std::size_t support_size() const noexcept;

 private:
  std::vector<double> masses_;
  std::vector<std::string> labels_;
};

/// Row-major dense matrix of doubles; the storage behind joint and
/// conditional matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> cells);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  [[nodiscard]] std::span<const double> cells() const noexcept { return cells_; }
  [[nodiscard]] std::vector<double> column(std::size_t c) const;
  [[nodiscard]] std::vector<double> row_sums() const;
  [[nodiscard]] std::vector<double> col_sums() const;
  [[nodiscard]] Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
};

/// Joint distribution of (Y, X): rows index Y-states, columns index X-states.
class JointMatrix {
 public:
  explicit JointMatrix(Matrix cells, std::vector<std::string> row_labels = {},
                       std::vector<std::string> col_labels = {});
  static JointMatrix from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] const Matrix& cells() const noexcept { return cells_; }
  [[nodiscard]] std::size_t n_rows() const noexcept { return cells_.rows(); }
  [[nodiscard]] std::size_t n_cols() const noexcept { return cells_.cols(); }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return cells_(r, c); }
  [[nodiscard]] const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  [[nodiscard]] const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

 private:
  Matrix cells_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

/// Column-stochastic matrix; column j is P(output | input = j). All-zero
/// columns are accepted and flagged degenerate (conditioning on a
/// probability-zero input state).
class ConditionalMatrix {
 public:
  explicit ConditionalMatrix(Matrix cells);
  static ConditionalMatrix from_columns(const std::vector<std::vector<double>>& columns);

  [[nodiscard]] const Matrix& cells() const noexcept { return cells_; }
  [[nodiscard]] std::size_t n_outputs() const noexcept { return cells_.rows(); }
  [[nodiscard]] std::size_t n_inputs() const noexcept { return cells_.cols(); }
  [[nodiscard]] bool is_degenerate(std::size_t input) const { return degenerate_[input]; }
  [[nodiscard]] std::vector<double> column(std::size_t input) const { return cells_.column(input); }

 private:
  Matrix cells_;
  std::vector<bool> degenerate_;
};

[[nodiscard]] double shannon_entropy(const Distribution& d);
// For raw mass vectors already known to be nonnegative (e.g. coupling atoms).
[[nodiscard]] double shannon_entropy(std::span<const double> masses);

/// Rényi entropy of the given order. Order 0 counts masses above
/// kZeroTolerance; order 1 is rejected (use shannon_entropy).
[[nodiscard]] double renyi_entropy(const Distribution& d, double order);

struct BayesSplit {
  ConditionalMatrix y_given_x;  // n_y x n_x
  ConditionalMatrix x_given_y;  // n_x x n_y
  Distribution p_x;
  Distribution p_y;
};

[[nodiscard]] BayesSplit conditionals_from_joint(const JointMatrix& joint);

}  // namespace entropic
