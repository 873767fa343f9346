#ifndef LOGCONTRAST_IO_HPP_
#define LOGCONTRAST_IO_HPP_

#include <string>
#include <vector>

#include "logcontrast/metrics.hpp"
#include "logcontrast/synthetic.hpp"
#include "logcontrast/tuning.hpp"

namespace logcontrast {

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17-significant-digit formatting so every written double reparses exactly.
std::string format_double(double value);

// Sidecar describing a dataset CSV (columns y, x1..xp, v1..vq of raw values).
struct DatasetMeta {
  Index p = 0;
  Index q = 0;
  bool centered = true;
  Vector pi_means;  // column means recorded by centering (may be empty)
  double y_mean = 0.0;
  std::uint64_t seed = 0;
  int v_case = 0;       // 0 when not synthetic
  double sigma = 0.0;
  double noise_sd = 0.0;
};

struct DatasetFile {
  Matrix X;
  Matrix V;
  Vector y;
  DatasetMeta meta;
};

void write_dataset(const std::string& csv_path, const Matrix& X, const Matrix& V,
                   const Vector& y, const DatasetMeta& meta);
DatasetFile read_dataset(const std::string& csv_path);

// Applies the sidecar's p/q/centering to produce the regression design.
LogContrastDesign design_from_file(const DatasetFile& file);

void write_coefficients(const std::string& path, const Coefficients& coefficients);
Coefficients read_coefficients(const std::string& path);

void write_consensus_trace(const std::string& path, const FitResult& result);
void write_chain_trace(const std::string& path, const FitResult& result);

void write_path_table(const std::string& path, const std::vector<PathEntry>& entries);
std::vector<PathEntry> read_path_table(const std::string& path);

void write_metrics_table(const std::string& path,
                         const std::vector<CellSummary>& summaries);
void write_aee_curve(const std::string& path, const std::vector<AeeCurvePoint>& points);

// Support bitmask (bit j set when ζ_j ≠ 0) as a hex string, MSB first.
std::string support_mask_hex(const Vector& zeta, double zero_eps = 0.0);
std::vector<bool> support_mask_from_hex(const std::string& hex, Index d);

}  // namespace logcontrast

#endif  // LOGCONTRAST_IO_HPP_
