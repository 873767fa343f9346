#ifndef LOGCONTRAST_DESIGN_HPP_
#define LOGCONTRAST_DESIGN_HPP_

#include <vector>

#include "logcontrast/types.hpp"

namespace logcontrast {

// Strictly positive matrix whose rows lie in the unit simplex.
class CompositionMatrix {
 public:
  explicit CompositionMatrix(Matrix values, double simplex_tol = kSimplexTol);

  const Matrix& values() const { return values_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

 private:
  Matrix values_;
};

// Regression data for the constrained log-contrast model:
// y ≈ Πζ with Π = (Z, V), Z = log X elementwise, subject to C⊤ζ = 0.
struct LogContrastDesign {
  Vector y;
  Matrix Pi;  // n × d, d = p + q
  Index p = 0;
  Index q = 0;
  bool centered = false;
  Vector pi_means;  // recorded column means (empty when not centered)
  double y_mean = 0.0;

  Index n() const { return Pi.rows(); }
  Index d() const { return Pi.cols(); }
  auto Z() const { return Pi.leftCols(p); }
  auto V() const { return Pi.rightCols(q); }
  Vector constraint() const { return constraint_vector(p, q); }
};

LogContrastDesign build_design(const CompositionMatrix& X, const Matrix& V,
                               const Vector& y, bool center);

// Row block of a design living on one machine.
struct Shard {
  Vector y;
  Matrix Pi;
  Index p = 0;
  Index q = 0;

  Index n() const { return Pi.rows(); }
  Index d() const { return Pi.cols(); }
};

struct ShardedDataset {
  std::vector<Shard> shards;
  Index p = 0;
  Index q = 0;

  int machine_count() const { return static_cast<int>(shards.size()); }
  Index d() const { return p + q; }
  Index total_rows() const;
};

// Contiguous row blocks in original order; the first K−1 shards carry
// ⌊n/K⌋ rows and the last shard absorbs the remainder.
ShardedDataset partition(const LogContrastDesign& design, int machine_count);

// Inverse of partition (row concatenation in shard order).
LogContrastDesign reassemble(const ShardedDataset& shards);

}  // namespace logcontrast

#endif  // LOGCONTRAST_DESIGN_HPP_
