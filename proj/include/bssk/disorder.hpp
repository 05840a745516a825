#pragma once

// Disorder matrices J with i.i.d. centered, unit-variance entries.

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace bssk {

enum class DistributionKind { gaussian, rademacher, uniform };

struct DisorderSpec {
  DistributionKind kind = DistributionKind::gaussian;
  double w3 = 0.0;  ///< E[J^3]
  double w4 = 3.0;  ///< E[J^4]
};

DisorderSpec make_distribution(DistributionKind kind);

std::string_view to_string(DistributionKind kind);
/// Accepts "gaussian", "rademacher", "uniform"; throws ParameterError otherwise.
DistributionKind parse_distribution(std::string_view name);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sampled disorder in canonical orientation (rows >= cols). If the requested
/// shape was wide, the stored matrix is the transpose and `swapped` is set.
class DisorderMatrix {
 public:
  DisorderMatrix(RowMatrix entries, std::uint64_t seed);

  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  const RowMatrix& entries() const { return entries_; }
  std::uint64_t seed() const { return seed_; }
  bool swapped() const { return swapped_; }

  /// Entries in the shape originally requested.
  RowMatrix original() const;

 private:
  RowMatrix entries_;
  std::uint64_t seed_;
  bool swapped_ = false;
};

/// Entry (i, j) of the requested n1 x n2 matrix is drawn from counter i*n2+j of
/// the stream keyed by `seed`, so equal arguments give bit-identical matrices.
DisorderMatrix sample_disorder(const DisorderSpec& spec, Eigen::Index n1, Eigen::Index n2, std::uint64_t seed);

/// Sigma^{1/2} J for diagonal Sigma^{1/2} (one scale per row of the canonical
/// matrix). No analytic constants are provided for scaled disorder.
DisorderMatrix scale_rows(const DisorderMatrix& j, const Eigen::VectorXd& row_scale);

/// One line per row, comma separated, 17 significant digits.
void write_csv(std::ostream& out, const DisorderMatrix& j);

}  // namespace bssk
