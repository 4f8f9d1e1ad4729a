#include "splab/sampling.hpp"

#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "splab/error.hpp"

namespace splab {

std::uint64_t hash_lambdas(const Eigen::VectorXd& lambdas) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Index k = 0; k < lambdas.size(); ++k) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &lambdas(k), sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

Dataset sample_dataset(const SpectralModel& model, const KLLaw& law, Index n, std::uint64_t seed,
                       std::uint64_t replicate, StreamRole role) {
  if (n < 1) throw InvalidInput("sample_dataset: need n >= 1");
  const Index d = model.dim();
  Engine rng = make_stream(seed, role, replicate);
  const Eigen::VectorXd scale = model.lambdas().cwiseSqrt();

  Dataset data;
  data.rows.resize(n, d);
  data.seed = seed;
  data.replicate = replicate;
  data.role = role;
  data.lambda_hash = hash_lambdas(model.lambdas());

  Eigen::VectorXd eta(d);
  for (Index i = 0; i < n; ++i) {
    law.draw(rng, eta);
    data.rows.row(i) = scale.cwiseProduct(eta).transpose();
  }
  return data;
}

namespace {

SymOperatord gram(const Eigen::MatrixXd& rows) {
  const Index d = rows.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  s.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose(), 1.0 / static_cast<double>(rows.rows()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SymOperatord(s);
}

}  // namespace

SymOperatord empirical_covariance(const Dataset& data) {
  if (data.n() < 1) throw InvalidInput("empirical_covariance: empty dataset");
  return gram(data.rows);
}

EmpiricalProjection empirical_projector(const Dataset& data, const SpectralModel& model,
                                        const IndexBlock& block) {
  if (data.dim() != model.dim()) throw InvalidInput("empirical_projector: dimension mismatch");
  block.check(model.dim());
  SymOperatord cov = empirical_covariance(data);
  SymOperatord p_hat = projector(eigh(cov), block);
  SymOperatord e = cov - model.covariance();
  return {std::move(p_hat), std::move(cov), std::move(e)};
}

double projector_statistic(const Dataset& data, const IndexBlock& block) {
  block.check(data.dim());
  const SymOperatord p_hat = projector(eigh(empirical_covariance(data)), block);
  const SymOperatord p = coordinate_projector<double>(data.dim(), block);
  return static_cast<double>(data.n()) * hs_distance_sq(p_hat, p);
}

std::vector<double> sample_limit_stat(const PsiSpectrum& spectrum, Index draws, std::uint64_t seed) {
  if (spectrum.empty()) throw InvalidInput("sample_limit_stat: empty Psi spectrum");
  if (draws < 1) throw InvalidInput("sample_limit_stat: need draws >= 1");
  const std::vector<double> values = spectrum.values();
  Engine rng = make_stream(seed, StreamRole::kLimit);
  std::normal_distribution<double> normal;
  std::vector<double> out(static_cast<std::size_t>(draws));
  for (auto& x : out) {
    double s = 0.0;
    for (double v : values) {
      const double g = normal(rng);
      s += v * g * g;
    }
    x = s;
  }
  return out;
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (Index j = 0; j < data.dim(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  out << '\n';
  char buf[32];
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.rows(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("read_csv: missing header");
  const auto header = split_commas(strip_cr(line));
  const Index d = static_cast<Index>(header.size());
  for (Index j = 0; j < d; ++j) {
    if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j + 1)) {
      throw InvalidInput("read_csv: header must be x1..xd, got '" + header[static_cast<std::size_t>(j)] + "'");
    }
  }

  std::vector<double> values;
  Index n = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (static_cast<Index>(fields.size()) != d) {
      throw InvalidInput("read_csv: row " + std::to_string(n + 1) + " has " +
                         std::to_string(fields.size()) + " fields, expected " + std::to_string(d));
    }
    for (const auto& f : fields) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || f.empty() || !std::isfinite(v)) {
        throw InvalidInput("read_csv: bad number '" + f + "' in row " + std::to_string(n + 1));
      }
      values.push_back(v);
    }
    ++n;
  }
  if (n == 0) throw InvalidInput("read_csv: no data rows");

  Dataset data;
  data.rows = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, d);
  return data;
}

}  // namespace splab
