#include "nefb/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "nefb/errors.hpp"
#include "nefb/parallel.hpp"

namespace nefb {
namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SchemaError("pearson: vectors differ in length");
  if (a.size() < 2) throw ArgumentError("pearson: need at least two observations");
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return clamp_unit(sab / std::sqrt(saa * sbb));
}

CorrelationMatrix::CorrelationMatrix(std::size_t size, std::vector<double> values, std::vector<bool> valid)
    : size_(size), values_(std::move(values)), valid_(std::move(valid)) {
  if (values_.size() != size * size || valid_.size() != size) {
    throw SchemaError("correlation matrix storage does not match its size");
  }
}

CorrelationMatrix correlation_matrix(const Matrix& x) {
  const std::size_t m = x.rows();
  const std::size_t p = x.cols();
  if (m < 2) throw ArgumentError("correlation needs at least two instances");

  // Centered columns, column-major.
  std::vector<double> centered(m * p);
  std::vector<double> norm(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += x(i, j);
    mean /= static_cast<double>(m);
    double* col = centered.data() + j * m;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      col[i] = x(i, j) - mean;
      ss += col[i] * col[i];
    }
    norm[j] = std::sqrt(ss);
  }

  std::vector<double> values(p * p, 0.0);
  std::vector<bool> valid(p);
  for (std::size_t j = 0; j < p; ++j) {
    valid[j] = norm[j] > 0.0;
    values[j * p + j] = 1.0;
  }
  parallel_for(p, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      if (norm[j] == 0.0) continue;
      const double* cj = centered.data() + j * m;
      for (std::size_t k = j + 1; k < p; ++k) {
        if (norm[k] == 0.0) continue;
        const double r = clamp_unit(dot(cj, centered.data() + k * m, m) / (norm[j] * norm[k]));
        values[j * p + k] = r;
      }
    }
  });
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) values[k * p + j] = values[j * p + k];
  }
  return CorrelationMatrix(p, std::move(values), std::move(valid));
}

void write_correlation_csv(const CorrelationMatrix& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < c.size(); ++j) {
    for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << c(j, k);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace nefb
