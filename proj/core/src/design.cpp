#include "logcontrast/design.hpp"

#include <cmath>
#include <string>

namespace logcontrast {

CompositionMatrix::CompositionMatrix(Matrix values, double simplex_tol)
    : values_(std::move(values)) {
  for (Index i = 0; i < values_.rows(); ++i) {
    for (Index j = 0; j < values_.cols(); ++j) {
      if (!(values_(i, j) > 0.0)) {
        throw SimplexDomainError("composition entry must be strictly positive: row " +
                                     std::to_string(i) + ", column " + std::to_string(j),
                                 i, j);
      }
    }
    const double row_sum = values_.row(i).sum();
    if (std::abs(row_sum - 1.0) > simplex_tol) {
      throw SimplexSumError("composition row " + std::to_string(i) +
                                " sums to " + std::to_string(row_sum) + ", expected 1",
                            i);
    }
  }
}

LogContrastDesign build_design(const CompositionMatrix& X, const Matrix& V,
                               const Vector& y, bool center) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Index q = V.cols();
  if (V.rows() != n && q > 0) {
    throw ShapeError("V has " + std::to_string(V.rows()) + " rows, expected " +
                     std::to_string(n));
  }
  if (y.size() != n) {
    throw ShapeError("y has " + std::to_string(y.size()) + " entries, expected " +
                     std::to_string(n));
  }

  LogContrastDesign design;
  design.p = p;
  design.q = q;
  design.Pi.resize(n, p + q);
  design.Pi.leftCols(p) = X.values().array().log().matrix();
  if (q > 0) design.Pi.rightCols(q) = V;
  design.y = y;

  if (center) {
    design.pi_means = design.Pi.colwise().mean();
    design.y_mean = design.y.mean();
    design.Pi.rowwise() -= design.pi_means.transpose();
    design.y.array() -= design.y_mean;
    design.centered = true;
  }
  return design;
}

Index ShardedDataset::total_rows() const {
  Index n = 0;
  for (const auto& s : shards) n += s.n();
  return n;
}

ShardedDataset partition(const LogContrastDesign& design, int machine_count) {
  const Index n = design.n();
  if (machine_count <= 0) {
    throw ParameterError("machine count must be positive, got " +
                         std::to_string(machine_count));
  }
  if (machine_count > n) {
    throw ParameterError("machine count " + std::to_string(machine_count) +
                         " exceeds sample size " + std::to_string(n));
  }
  const Index base = n / machine_count;
  ShardedDataset out;
  out.p = design.p;
  out.q = design.q;
  out.shards.reserve(machine_count);
  Index start = 0;
  for (int k = 0; k < machine_count; ++k) {
    const Index rows = (k == machine_count - 1) ? n - start : base;
    Shard shard;
    shard.y = design.y.segment(start, rows);
    shard.Pi = design.Pi.middleRows(start, rows);
    shard.p = design.p;
    shard.q = design.q;
    out.shards.push_back(std::move(shard));
    start += rows;
  }
  return out;
}

LogContrastDesign reassemble(const ShardedDataset& sharded) {
  LogContrastDesign design;
  design.p = sharded.p;
  design.q = sharded.q;
  const Index n = sharded.total_rows();
  design.y.resize(n);
  design.Pi.resize(n, sharded.d());
  Index start = 0;
  for (const auto& s : sharded.shards) {
    design.y.segment(start, s.n()) = s.y;
    design.Pi.middleRows(start, s.n()) = s.Pi;
    start += s.n();
  }
  return design;
}

}  // namespace logcontrast
