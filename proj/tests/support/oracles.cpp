#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace amc::oracle {

TensorD random_tensor(const Shape& shape, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  TensorD t(shape);
  for (auto& v : t.data()) v = u(rng);
  return t;
}

double dot(const TensorD& a, const TensorD& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double relative_error(std::span<const double> a, std::span<const double> b, double floor) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_error: size mismatch");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  if (scale < floor) return std::sqrt(diff);
  return std::sqrt(diff) / scale;
}

double relative_error(const TensorD& a, const TensorD& b, double floor) {
  if (a.shape() != b.shape()) throw std::invalid_argument("relative_error: shape mismatch");
  return relative_error(a.data(), b.data(), floor);
}

TensorD numeric_gradient(TensorD& x, const std::function<double()>& loss, double h) {
  TensorD g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = loss();
    x[i] = orig - h;
    const double down = loss();
    x[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

TensorD direct_conv1d(const TensorD& weight, const TensorD& bias, std::size_t stride, std::size_t padding,
                      const TensorD& input) {
  const std::size_t batch = input.dim(0), in_ch = input.dim(1), len = input.dim(2);
  const std::size_t out_ch = weight.dim(0), k = weight.dim(2);
  const std::size_t out_len = (len + 2 * padding - k) / stride + 1;
  TensorD out({batch, out_ch, out_len});
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t o = 0; o < out_ch; ++o)
      for (std::size_t t = 0; t < out_len; ++t) {
        double s = bias[o];
        for (std::size_t c = 0; c < in_ch; ++c)
          for (std::size_t j = 0; j < k; ++j) {
            const long pos = static_cast<long>(t * stride + j) - static_cast<long>(padding);
            if (pos < 0 || pos >= static_cast<long>(len)) continue;
            s += weight.at(o, c, j) * input.at(b, c, static_cast<std::size_t>(pos));
          }
        out.at(b, o, t) = s;
      }
  return out;
}

TensorD direct_batchnorm(const TensorD& gamma, const TensorD& beta, double eps, const TensorD& input) {
  const std::size_t batch = input.dim(0), ch = input.dim(1);
  const std::size_t len = input.rank() == 3 ? input.dim(2) : 1;
  TensorD out(input.shape());
  for (std::size_t c = 0; c < ch; ++c) {
    double mean = 0.0;
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t t = 0; t < len; ++t) mean += input[(b * ch + c) * len + t];
    mean /= static_cast<double>(batch * len);
    double var = 0.0;
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t t = 0; t < len; ++t) {
        const double d = input[(b * ch + c) * len + t] - mean;
        var += d * d;
      }
    var /= static_cast<double>(batch * len);
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t t = 0; t < len; ++t) {
        const std::size_t i = (b * ch + c) * len + t;
        out[i] = gamma[c] * (input[i] - mean) / std::sqrt(var + eps) + beta[c];
      }
  }
  return out;
}

TensorD brute_center_update(const TensorD& features, std::span<const int> labels, const TensorD& centers,
                            double alpha) {
  const std::size_t k = centers.dim(0), d = centers.dim(1);
  TensorD out = centers;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> delta(d, 0.0);
    double count = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != static_cast<int>(j)) continue;
      count += 1.0;
      for (std::size_t q = 0; q < d; ++q) delta[q] += centers.at(j, q) - features.at(i, q);
    }
    for (std::size_t q = 0; q < d; ++q) out.at(j, q) = centers.at(j, q) - alpha * delta[q] / (1.0 + count);
  }
  return out;
}

EigenDecomposition jacobi_eigen(std::vector<std::vector<double>> a, double tol, int max_sweeps) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a[i][j] * a[i][j];
        if (i != j) off += a[i][j] * a[i][j];
      }
    if (off <= tol * tol * std::max(total, 1e-300)) break;

    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  EigenDecomposition out;
  for (std::size_t idx : order) {
    out.values.push_back(a[idx][idx]);
    std::vector<double> vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][idx];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

}  // namespace amc::oracle
