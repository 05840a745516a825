#include "bssk/disorder.hpp"

#include <cmath>
#include <ostream>

#include "bssk/errors.hpp"
#include "bssk/random.hpp"

namespace bssk {

DisorderSpec make_distribution(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::gaussian: return {kind, 0.0, 3.0};
    case DistributionKind::rademacher: return {kind, 0.0, 1.0};
    case DistributionKind::uniform: return {kind, 0.0, 9.0 / 5.0};
  }
  throw ParameterError("unknown distribution kind");
}

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::gaussian: return "gaussian";
    case DistributionKind::rademacher: return "rademacher";
    case DistributionKind::uniform: return "uniform";
  }
  return "unknown";
}

DistributionKind parse_distribution(std::string_view name) {
  if (name == "gaussian") return DistributionKind::gaussian;
  if (name == "rademacher") return DistributionKind::rademacher;
  if (name == "uniform") return DistributionKind::uniform;
  throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

DisorderMatrix::DisorderMatrix(RowMatrix entries, std::uint64_t seed) : seed_(seed) {
  if (entries.rows() < 1 || entries.cols() < 1) throw DimensionError("disorder matrix must be non-empty");
  if (entries.rows() < entries.cols()) {
    entries_ = entries.transpose();
    swapped_ = true;
  } else {
    entries_ = std::move(entries);
  }
}

RowMatrix DisorderMatrix::original() const {
  if (swapped_) return entries_.transpose();
  return entries_;
}

DisorderMatrix sample_disorder(const DisorderSpec& spec, Eigen::Index n1, Eigen::Index n2, std::uint64_t seed) {
  if (n1 < 1 || n2 < 1) throw DimensionError("sample_disorder: dimensions must be positive");
  const CounterStream stream(seed);
  const double sqrt3 = std::sqrt(3.0);
  RowMatrix j(n1, n2);
  for (Eigen::Index r = 0; r < n1; ++r) {
    for (Eigen::Index c = 0; c < n2; ++c) {
      const auto k = static_cast<std::uint64_t>(r * n2 + c);
      switch (spec.kind) {
        case DistributionKind::gaussian: j(r, c) = stream.normal(k); break;
        case DistributionKind::rademacher: j(r, c) = (stream.block(k)[0] & 1u) ? 1.0 : -1.0; break;
        case DistributionKind::uniform: j(r, c) = sqrt3 * (2.0 * stream.uniform(k) - 1.0); break;
      }
    }
  }
  return DisorderMatrix(std::move(j), seed);
}

DisorderMatrix scale_rows(const DisorderMatrix& j, const Eigen::VectorXd& row_scale) {
  if (row_scale.size() != j.rows()) throw DimensionError("scale_rows: one scale per row required");
  RowMatrix scaled = row_scale.asDiagonal() * j.entries();
  return DisorderMatrix(std::move(scaled), j.seed());
}

void write_csv(std::ostream& out, const DisorderMatrix& j) {
  const auto old = out.precision(17);
  const RowMatrix m = j.original();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace bssk
