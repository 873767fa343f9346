#include "logcontrast/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace logcontrast {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open: " + path);
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& text) {
  std::size_t pos = 0;
  const double value = std::stod(text, &pos);
  return value;
}

std::string meta_path_for(const std::string& csv_path) {
  return csv_path + ".meta.json";
}

}  // namespace

void write_dataset(const std::string& csv_path, const Matrix& X, const Matrix& V,
                   const Vector& y, const DatasetMeta& meta) {
  const Index n = X.rows();
  const Index p = X.cols();
  const Index q = V.cols();
  if (y.size() != n || (q > 0 && V.rows() != n)) {
    throw ShapeError("dataset blocks have mismatched row counts");
  }

  auto out = open_output(csv_path);
  out << "y";
  for (Index j = 0; j < p; ++j) out << ",x" << (j + 1);
  for (Index j = 0; j < q; ++j) out << ",v" << (j + 1);
  out << "\n";
  for (Index i = 0; i < n; ++i) {
    out << format_double(y[i]);
    for (Index j = 0; j < p; ++j) out << "," << format_double(X(i, j));
    for (Index j = 0; j < q; ++j) out << "," << format_double(V(i, j));
    out << "\n";
  }

  json j;
  j["p"] = meta.p;
  j["q"] = meta.q;
  j["centered"] = meta.centered;
  j["y_mean"] = meta.y_mean;
  j["pi_means"] = std::vector<double>(meta.pi_means.data(),
                                      meta.pi_means.data() + meta.pi_means.size());
  j["seed"] = meta.seed;
  j["case"] = meta.v_case;
  j["sigma"] = meta.sigma;
  j["noise_sd"] = meta.noise_sd;
  auto meta_out = open_output(meta_path_for(csv_path));
  meta_out << j.dump(2) << "\n";
}

DatasetFile read_dataset(const std::string& csv_path) {
  auto meta_in = open_input(meta_path_for(csv_path));
  json j;
  meta_in >> j;
  DatasetFile file;
  file.meta.p = j.at("p").get<Index>();
  file.meta.q = j.at("q").get<Index>();
  file.meta.centered = j.at("centered").get<bool>();
  file.meta.y_mean = j.value("y_mean", 0.0);
  const auto means = j.value("pi_means", std::vector<double>{});
  file.meta.pi_means =
      Eigen::Map<const Vector>(means.data(), static_cast<Index>(means.size()));
  file.meta.seed = j.value("seed", std::uint64_t{0});
  file.meta.v_case = j.value("case", 0);
  file.meta.sigma = j.value("sigma", 0.0);
  file.meta.noise_sd = j.value("noise_sd", 0.0);

  auto in = open_input(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw FileError("empty dataset file: " + csv_path);
  const auto header = split_csv_line(line);
  const Index p = file.meta.p;
  const Index q = file.meta.q;
  if (static_cast<Index>(header.size()) != 1 + p + q) {
    throw ShapeError("dataset header has " + std::to_string(header.size()) +
                     " columns, sidecar expects " + std::to_string(1 + p + q));
  }

  std::vector<double> ys;
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != 1 + p + q) {
      throw ShapeError("dataset row has wrong column count");
    }
    ys.push_back(parse_double(fields[0]));
    for (Index j = 0; j < p; ++j) xs.push_back(parse_double(fields[1 + j]));
    for (Index j = 0; j < q; ++j) vs.push_back(parse_double(fields[1 + p + j]));
  }
  const Index n = static_cast<Index>(ys.size());
  file.y = Eigen::Map<const Vector>(ys.data(), n);
  file.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(xs.data(), n, p);
  file.V = q > 0
               ? Matrix(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                       Eigen::Dynamic, Eigen::RowMajor>>(
                     vs.data(), n, q))
               : Matrix(n, 0);
  return file;
}

LogContrastDesign design_from_file(const DatasetFile& file) {
  return build_design(CompositionMatrix(file.X), file.V, file.y, file.meta.centered);
}

void write_coefficients(const std::string& path, const Coefficients& coefficients) {
  auto out = open_output(path);
  out << "name,value\n";
  for (Index j = 0; j < coefficients.size(); ++j) {
    if (j < coefficients.p) {
      out << "beta_" << (j + 1);
    } else {
      out << "theta_" << (j - coefficients.p + 1);
    }
    out << "," << format_double(coefficients.zeta[j]) << "\n";
  }
}

Coefficients read_coefficients(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  Index p = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ShapeError("coefficient row needs name,value");
    if (fields[0].rfind("beta_", 0) == 0) ++p;
    values.push_back(parse_double(fields[1]));
  }
  Vector zeta = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  return Coefficients(zeta, p);
}

void write_consensus_trace(const std::string& path, const FitResult& result) {
  auto out = open_output(path);
  out << "round,consensus_inf,zero_sum,dual_step_inf,objective,cd_sweeps\n";
  for (const auto& r : result.rounds) {
    out << r.round << "," << format_double(r.consensus_inf) << ","
        << format_double(r.zero_sum) << "," << format_double(r.dual_step_inf) << ","
        << format_double(r.objective) << "," << r.cd_sweeps << "\n";
  }
}

void write_chain_trace(const std::string& path, const FitResult& result) {
  auto out = open_output(path);
  if (result.chain_rounds.empty()) {
    out << "round\n";
    return;
  }
  const Index K = result.chain_rounds.front().g.size();
  out << "round,objective,max_g,max_r_inf,max_s_inf,messages,cumulative_scalars,cd_sweeps";
  for (Index k = 0; k < K; ++k) out << ",g_" << (k + 1);
  for (Index k = 0; k + 1 < K; ++k) out << ",r_inf_" << (k + 1);
  for (Index k = 0; k < K; k += 2) out << ",s_inf_" << (k + 1);
  out << "\n";
  int round = 0;
  for (const auto& r : result.chain_rounds) {
    out << round++ << "," << format_double(r.objective) << ","
        << format_double(r.max_g()) << "," << format_double(r.max_r_inf()) << ","
        << format_double(r.max_s_inf()) << "," << r.messages << ","
        << r.cumulative_scalars << "," << r.cd_sweeps;
    for (Index k = 0; k < r.g.size(); ++k) out << "," << format_double(r.g[k]);
    for (Index k = 0; k < r.r_inf.size(); ++k) out << "," << format_double(r.r_inf[k]);
    for (Index k = 0; k < r.s_inf.size(); ++k) out << "," << format_double(r.s_inf[k]);
    out << "\n";
  }
}

std::string support_mask_hex(const Vector& zeta, double zero_eps) {
  const Index d = zeta.size();
  const Index digits = (d + 3) / 4;
  std::string hex(digits, '0');
  for (Index j = 0; j < d; ++j) {
    if (std::abs(zeta[j]) <= zero_eps) continue;
    const Index digit = digits - 1 - j / 4;  // MSB first
    const int bit = static_cast<int>(j % 4);
    int value = hex[digit] <= '9' ? hex[digit] - '0' : hex[digit] - 'a' + 10;
    value |= 1 << bit;
    hex[digit] = value < 10 ? static_cast<char>('0' + value)
                            : static_cast<char>('a' + value - 10);
  }
  return hex;
}

std::vector<bool> support_mask_from_hex(const std::string& hex, Index d) {
  std::vector<bool> mask(d, false);
  const Index digits = static_cast<Index>(hex.size());
  for (Index j = 0; j < d; ++j) {
    const Index digit = digits - 1 - j / 4;
    if (digit < 0) break;
    const char c = hex[digit];
    const int value = c <= '9' ? c - '0' : c - 'a' + 10;
    mask[j] = (value >> (j % 4)) & 1;
  }
  return mask;
}

void write_path_table(const std::string& path, const std::vector<PathEntry>& entries) {
  auto out = open_output(path);
  out << "lambda,gic,df,rss,support\n";
  for (const auto& e : entries) {
    out << format_double(e.lambda) << "," << format_double(e.gic) << "," << e.df << ","
        << format_double(e.rss) << "," << support_mask_hex(e.zeta) << "\n";
  }
}

std::vector<PathEntry> read_path_table(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<PathEntry> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) throw ShapeError("path row needs 5 columns");
    PathEntry e;
    e.lambda = parse_double(fields[0]);
    e.gic = parse_double(fields[1]);
    e.df = static_cast<int>(parse_double(fields[2]));
    e.rss = parse_double(fields[3]);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_metrics_table(const std::string& path,
                         const std::vector<CellSummary>& summaries) {
  auto out = open_output(path);
  out << "method,penalty,K,sigma,reps,aee_mean,aee_se,fp_mean,fp_se,fn_mean,fn_se,"
         "fp_c_mean,fp_nc_mean,fn_c_mean,fn_nc_mean,runtime_mean,rounds_mean\n";
  for (const auto& s : summaries) {
    out << to_string(s.method) << "," << to_string(s.penalty) << "," << s.machine_count
        << "," << format_double(s.sigma) << "," << s.reps << ","
        << format_double(s.aee_mean) << "," << format_double(s.aee_se) << ","
        << format_double(s.fp_mean) << "," << format_double(s.fp_se) << ","
        << format_double(s.fn_mean) << "," << format_double(s.fn_se) << ","
        << format_double(s.fp_c_mean) << "," << format_double(s.fp_nc_mean) << ","
        << format_double(s.fn_c_mean) << "," << format_double(s.fn_nc_mean) << ","
        << format_double(s.runtime_mean) << "," << format_double(s.rounds_mean)
        << "\n";
  }
}

void write_aee_curve(const std::string& path, const std::vector<AeeCurvePoint>& points) {
  auto out = open_output(path);
  out << "L,B,aee\n";
  for (const auto& pt : points) {
    out << pt.rounds << "," << pt.sweeps << "," << format_double(pt.aee) << "\n";
  }
}

}  // namespace logcontrast
