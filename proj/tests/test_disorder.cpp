#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bssk/disorder.hpp"
#include "bssk/errors.hpp"

using namespace bssk;

namespace {

// Raw moments by direct summation.
std::array<double, 4> moments(const RowMatrix& m) {
  std::array<double, 4> out{};
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double x = m.data()[i];
    out[0] += x;
    out[1] += x * x;
    out[2] += x * x * x;
    out[3] += x * x * x * x;
  }
  for (auto& v : out) v /= static_cast<double>(m.size());
  return out;
}

}  // namespace

TEST_CASE("distribution moments") {
  auto g = make_distribution(DistributionKind::gaussian);
  CHECK(g.w3 == 0.0);
  CHECK(g.w4 == 3.0);
  auto r = make_distribution(DistributionKind::rademacher);
  CHECK(r.w4 == 1.0);
  auto u = make_distribution(DistributionKind::uniform);
  CHECK(u.w3 == 0.0);
  CHECK(u.w4 == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(parse_distribution("uniform") == DistributionKind::uniform);
  CHECK_THROWS_AS(parse_distribution("cauchy"), ParameterError);
}

TEST_CASE("rademacher support") {
  const auto j = sample_disorder(make_distribution(DistributionKind::rademacher), 2, 2, 7);
  for (Eigen::Index i = 0; i < j.entries().size(); ++i) {
    const double x = j.entries().data()[i];
    CHECK((x == 1.0 || x == -1.0));
  }
}

TEST_CASE("gaussian sample moments") {
  const auto j = sample_disorder(make_distribution(DistributionKind::gaussian), 200, 100, 1);
  const auto m = moments(j.entries());
  CHECK(std::abs(m[0]) <= 4.0 / std::sqrt(20000.0));
  CHECK(std::abs(m[3] - 3.0) <= 0.15);
}

TEST_CASE("moments within five standard errors") {
  for (auto kind : {DistributionKind::gaussian, DistributionKind::rademacher, DistributionKind::uniform}) {
    const auto spec = make_distribution(kind);
    const auto j = sample_disorder(spec, 400, 300, 99);
    const auto m = moments(j.entries());
    const double n = 120000.0;
    // standard errors from the analytic moments; sixth and eighth from the law
    const double m6 = kind == DistributionKind::gaussian ? 15.0 : kind == DistributionKind::uniform ? 27.0 / 7.0 : 1.0;
    const double m8 = kind == DistributionKind::gaussian ? 105.0 : kind == DistributionKind::uniform ? 9.0 : 1.0;
    CHECK(std::abs(m[0]) <= 5.0 * std::sqrt(1.0 / n));
    CHECK(std::abs(m[1] - 1.0) <= 5.0 * std::sqrt((spec.w4 - 1.0) / n));
    CHECK(std::abs(m[2] - spec.w3) <= 5.0 * std::sqrt(m6 / n));
    CHECK(std::abs(m[3] - spec.w4) <= 5.0 * std::sqrt((m8 - spec.w4 * spec.w4) / n) + 1e-15);
  }
}

TEST_CASE("determinism") {
  const auto spec = make_distribution(DistributionKind::gaussian);
  const auto a = sample_disorder(spec, 30, 20, 5);
  const auto b = sample_disorder(spec, 30, 20, 5);
  CHECK(a.entries() == b.entries());
  const auto c = sample_disorder(spec, 30, 20, 6);
  CHECK(a.entries() != c.entries());
}

TEST_CASE("canonical orientation") {
  const auto spec = make_distribution(DistributionKind::uniform);
  const auto wide = sample_disorder(spec, 3, 7, 11);
  CHECK(wide.rows() == 7);
  CHECK(wide.cols() == 3);
  CHECK(wide.swapped());
  const RowMatrix orig = wide.original();
  CHECK(orig.rows() == 3);
  CHECK(orig.cols() == 7);
  CHECK(RowMatrix(orig.transpose()) == wide.entries());
  const auto tall = sample_disorder(spec, 7, 3, 11);
  CHECK_FALSE(tall.swapped());
}

TEST_CASE("zero dimensions") {
  const auto spec = make_distribution(DistributionKind::gaussian);
  CHECK_THROWS_AS(sample_disorder(spec, 0, 3, 1), DimensionError);
  CHECK_THROWS_AS(sample_disorder(spec, 3, 0, 1), DimensionError);
}

TEST_CASE("csv dump round trips") {
  const auto j = sample_disorder(make_distribution(DistributionKind::gaussian), 3, 2, 8);
  std::ostringstream out;
  write_csv(out, j);
  std::istringstream in(out.str());
  std::string line;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    Eigen::Index col = 0;
    while (std::getline(cells, cell, ',')) CHECK(std::stod(cell) == j.entries()(row, col++));
    CHECK(col == 2);
    ++row;
  }
  CHECK(row == 3);
}

TEST_CASE("row scaling hook") {
  const auto j = sample_disorder(make_distribution(DistributionKind::gaussian), 4, 2, 3);
  Eigen::VectorXd scale(4);
  scale << 1.0, 2.0, 0.5, 3.0;
  const auto s = scale_rows(j, scale);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index k = 0; k < 2; ++k) CHECK(s.entries()(i, k) == scale[i] * j.entries()(i, k));
}
