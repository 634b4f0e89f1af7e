#include "amc/eval/pca.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "amc/common/error.hpp"

namespace amc::eval {
namespace {

using Matrix = std::vector<double>;  // d x d row-major
using Vector = std::vector<double>;

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

Matrix multiply(const Matrix& a, const Matrix& b, std::size_t d) {
  Matrix c(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a[i * d + k];
      for (std::size_t j = 0; j < d; ++j) c[i * d + j] += aik * b[k * d + j];
    }
  return c;
}

Vector apply(const Matrix& a, const Vector& v, std::size_t d) {
  Vector w(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) w[i] += a[i * d + j] * v[j];
  return w;
}

double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Dominant eigenvector of a symmetric positive semi-definite matrix. Repeated
// squaring of A / ||A|| drives it towards the projector onto the leading
// eigenspace; plain power steps then polish the vector.
Vector dominant_eigenvector(const Matrix& a, std::size_t d) {
  Matrix b = a;
  const double scale = frobenius(b);
  for (auto& v : b) v /= scale;
  for (int step = 0; step < 64; ++step) {
    Matrix next = multiply(b, b, d);
    const double f = frobenius(next);
    for (auto& v : next) v /= f;
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - b[i]));
    b = std::move(next);
    if (change < 1e-15) break;
  }
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += b[i * d + j] * b[i * d + j];
    if (s > best_norm) {
      best_norm = s;
      best = j;
    }
  }
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = b[i * d + best];
  double n = norm(v);
  for (auto& x : v) x /= n;

  for (int it = 0; it < 1000; ++it) {
    Vector w = apply(a, v, d);
    n = norm(w);
    if (n == 0.0) break;
    for (auto& x : w) x /= n;
    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
    v = std::move(w);
    if (diff < 1e-15) break;
  }
  return v;
}

// Unit vector orthogonal to `v`, built from the basis vector v is least aligned with.
Vector orthogonal_to(const Vector& v) {
  const std::size_t d = v.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i < d; ++i)
    if (std::abs(v[i]) < std::abs(v[k])) k = i;
  Vector u(d, 0.0);
  u[k] = 1.0;
  for (std::size_t i = 0; i < d; ++i) u[i] -= v[k] * v[i];
  const double n = norm(u);
  for (auto& x : u) x /= n;
  return u;
}

void fix_sign(Vector& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  if (v[k] < 0)
    for (auto& x : v) x = -x;
}

double rayleigh(const Matrix& a, const Vector& v, std::size_t d) {
  const Vector w = apply(a, v, d);
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += v[i] * w[i];
  return s;
}

}  // namespace

Pca2d pca_fit_2d(const nn::TensorD& data) {
  nn::expect_rank(data, 2, "pca_2d");
  const std::size_t n = data.dim(0), d = data.dim(1);
  if (n < 3) throw ValueError("pca_2d: need at least 3 points");
  if (d < 2) throw ValueError("pca_2d: need at least 2 dimensions");

  Pca2d out;
  out.mean = nn::TensorD({d});
  double raw_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      out.mean[k] += data.at(i, k);
      raw_scale += data.at(i, k) * data.at(i, k);
    }
  for (std::size_t k = 0; k < d; ++k) out.mean[k] /= static_cast<double>(n);
  raw_scale /= static_cast<double>(n * d);

  std::vector<double> centered(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) centered[i * d + k] = data.at(i, k) - out.mean[k];

  Matrix cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) cov[a * d + b] += centered[i * d + a] * centered[i * d + b];
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      cov[a * d + b] /= static_cast<double>(n - 1);
      cov[b * d + a] = cov[a * d + b];
    }

  double trace = 0.0;
  for (std::size_t k = 0; k < d; ++k) trace += cov[k * d + k];
  if (!(trace > 1e-20 * std::max(raw_scale, 1e-300))) throw ValueError("pca_2d: all points coincide (rank 0)");

  Vector v1 = dominant_eigenvector(cov, d);
  const double lambda1 = rayleigh(cov, v1, d);

  Matrix deflated = cov;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) deflated[a * d + b] -= lambda1 * v1[a] * v1[b];
  Vector v2;
  if (frobenius(deflated) <= 1e-12 * lambda1) {
    v2 = orthogonal_to(v1);
  } else {
    v2 = dominant_eigenvector(deflated, d);
    // remove any residual v1 component picked up through rounding
    double dot = 0.0;
    for (std::size_t k = 0; k < d; ++k) dot += v1[k] * v2[k];
    for (std::size_t k = 0; k < d; ++k) v2[k] -= dot * v1[k];
    const double nv = norm(v2);
    for (auto& x : v2) x /= nv;
  }
  fix_sign(v1);
  fix_sign(v2);

  out.eigenvalues = {lambda1, std::max(0.0, rayleigh(cov, v2, d))};
  out.components = nn::TensorD({2, d});
  for (std::size_t k = 0; k < d; ++k) {
    out.components.at(0, k) = v1[k];
    out.components.at(1, k) = v2[k];
  }
  out.projection = nn::TensorD({n, 2});
  for (std::size_t i = 0; i < n; ++i) {
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      p1 += centered[i * d + k] * v1[k];
      p2 += centered[i * d + k] * v2[k];
    }
    out.projection.at(i, 0) = p1;
    out.projection.at(i, 1) = p2;
  }
  return out;
}

nn::TensorD pca_2d(const nn::TensorD& data) { return pca_fit_2d(data).projection; }

}  // namespace amc::eval
