#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "amc/common/error.hpp"
#include "amc/loss/joint_loss.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace amc;
using namespace amc::loss;
using nn::TensorD;
using oracle::random_tensor;

namespace {

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

std::vector<int> random_labels(std::size_t m, int k, std::mt19937_64& rng) {
  std::vector<int> labels(m);
  for (auto& l : labels) l = static_cast<int>(rng() % static_cast<unsigned>(k));
  return labels;
}

}  // namespace

TEST(Softmax, Examples) {
  const auto p = softmax(TensorD({1, 3}, {0, 0, 0}));
  for (double v : p.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  const auto q = softmax(TensorD({1, 2}, {std::log(2.0), 0.0}));
  EXPECT_NEAR(q[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(q[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, ShiftInvariantAndStable) {
  std::mt19937_64 rng(1);
  const auto z = random_tensor({4, 8}, rng, -80.0, 80.0);
  auto shifted = z;
  for (auto& v : shifted.data()) v += 123.0;
  const auto a = softmax(z), b = softmax(shifted);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  for (std::size_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < 8; ++k) s += a.at(r, k);
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
  const auto big = softmax(nn::Tensor({1, 3}, {1e4f, -1e4f, 0.0f}));
  EXPECT_TRUE(big.all_finite());
  EXPECT_FLOAT_EQ(big[0], 1.0f);
}

TEST(CrossEntropy, Examples) {
  const std::vector<int> label = {1};
  EXPECT_EQ(cross_entropy(TensorD({1, 3}, {0, 1, 0}), label, Reduction::Mean), 0.0);
  const auto uniform = softmax(TensorD({2, 8}));
  const std::vector<int> two = {3, 6};
  EXPECT_NEAR(cross_entropy(uniform, two, Reduction::Mean), std::log(8.0), 1e-12);
  EXPECT_NEAR(cross_entropy(uniform, two, Reduction::Sum), 2.0 * std::log(8.0), 1e-12);
  // log argument is clamped
  EXPECT_NEAR(cross_entropy(TensorD({1, 2}, {1, 0}), label, Reduction::Sum), -std::log(1e-12), 1e-9);
}

TEST(CrossEntropy, LabelValidation) {
  const auto p = softmax(TensorD({2, 3}));
  EXPECT_THROW(cross_entropy(p, std::vector<int>{0, 3}, Reduction::Mean), ValueError);
  EXPECT_THROW(cross_entropy(p, std::vector<int>{0, -1}, Reduction::Mean), ValueError);
  EXPECT_THROW(cross_entropy(p, std::vector<int>{0}, Reduction::Mean), ValueError);
}

TEST(SoftmaxCeBackward, Examples) {
  const auto g = softmax_ce_backward(TensorD({1, 2}), std::vector<int>{0}, Reduction::Mean);
  EXPECT_NEAR(g[0], -0.5, 1e-15);
  EXPECT_NEAR(g[1], 0.5, 1e-15);
  const auto s = softmax_ce_backward(TensorD({1, 3}, {50, -50, -50}), std::vector<int>{0}, Reduction::Mean);
  for (double v : s.data()) EXPECT_NEAR(v, 0.0, 1e-20);
  const auto mean = softmax_ce_backward(TensorD({2, 2}), std::vector<int>{0, 1}, Reduction::Mean);
  const auto sum = softmax_ce_backward(TensorD({2, 2}), std::vector<int>{0, 1}, Reduction::Sum);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(sum[i], 2.0 * mean[i], 1e-15);
}

TEST(SoftmaxCeBackward, GradientsMatchFiniteDifferences) {
  for (auto seed : kSeeds) EXPECT_LT(oracle::check_softmax_ce(seed).error, 1e-4) << "seed " << seed;
}

TEST(CenterLoss, Examples) {
  Centers<double> c(1, 2, 0.5);
  EXPECT_EQ(center_loss(TensorD({1, 2}, {0, 0}), std::vector<int>{0}, c, Reduction::Sum), 0.0);
  EXPECT_DOUBLE_EQ(center_loss(TensorD({1, 2}, {3, 4}), std::vector<int>{0}, c, Reduction::Sum), 12.5);
  EXPECT_DOUBLE_EQ(center_loss(TensorD({2, 2}, {3, 4, 3, 4}), std::vector<int>{0, 0}, c, Reduction::Sum), 25.0);
  EXPECT_DOUBLE_EQ(center_loss(TensorD({2, 2}, {3, 4, 3, 4}), std::vector<int>{0, 0}, c, Reduction::Mean), 12.5);
  const auto g = center_loss_grad(TensorD({1, 2}, {1, 0}), std::vector<int>{0}, c, Reduction::Sum);
  EXPECT_EQ(g, TensorD({1, 2}, {1, 0}));
  c.c = TensorD({1, 2}, {1, 0});
  const auto z = center_loss_grad(TensorD({1, 2}, {1, 0}), std::vector<int>{0}, c, Reduction::Sum);
  EXPECT_EQ(z, TensorD({1, 2}));
  EXPECT_THROW(center_loss(TensorD({1, 2}), std::vector<int>{1}, c, Reduction::Sum), ValueError);
}

TEST(CenterLoss, NonnegativeAndZeroOnlyAtCenters) {
  std::mt19937_64 rng(2);
  Centers<double> c(4, 3, 0.5);
  c.c = random_tensor({4, 3}, rng);
  const auto labels = random_labels(10, 4, rng);
  TensorD x({10, 3});
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t q = 0; q < 3; ++q) x.at(i, q) = c.c.at(static_cast<std::size_t>(labels[i]), q);
  EXPECT_EQ(center_loss(x, labels, c, Reduction::Sum), 0.0);
  x.at(4, 1) += 1e-3;
  EXPECT_GT(center_loss(x, labels, c, Reduction::Sum), 0.0);
}

TEST(CenterLoss, GradientMatchesFiniteDifferencesTightly) {
  for (auto seed : kSeeds) EXPECT_LT(oracle::check_center_loss(seed).error, 1e-6) << "seed " << seed;
}

TEST(CenterUpdate, HandExample) {
  Centers<double> c(2, 2, 0.5);
  const auto updated = center_update(TensorD({1, 2}, {2, 0}), std::vector<int>{0}, c);
  EXPECT_DOUBLE_EQ(updated.c.at(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(updated.c.at(0, 1), 0.0);
  EXPECT_EQ(updated.c.at(1, 0), 0.0);
}

TEST(CenterUpdate, AbsentClassesUntouched) {
  std::mt19937_64 rng(3);
  Centers<float> c(5, 4, 0.7f);
  c.c = random_tensor({5, 4}, rng).cast<float>();
  const auto x = random_tensor({6, 4}, rng).cast<float>();
  const std::vector<int> labels = {0, 2, 2, 0, 4, 4};
  const auto u = center_update(x, labels, c);
  for (std::size_t j : {1u, 3u})
    for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(u.c.at(j, q), c.c.at(j, q));
  EXPECT_NE(u.c.at(2, 0), c.c.at(2, 0));
}

TEST(CenterUpdate, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng() % 32, d = 1 + rng() % 16;
    std::uniform_real_distribution<double> a(0.0, 1.0);
    Centers<double> c(8, d, a(rng));
    c.c = random_tensor({8, d}, rng, -2.0, 2.0);
    const auto x = random_tensor({m, d}, rng, -2.0, 2.0);
    const auto labels = random_labels(m, 8, rng);
    const auto got = center_update(x, labels, c);
    const auto want = oracle::brute_center_update(x, labels, c.c, c.alpha);
    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got.c[i], want[i], 1e-12);
  }
}

TEST(CenterUpdate, MovesCentersTowardClassMeans) {
  std::mt19937_64 rng(5);
  for (double alpha : {0.1, 0.5, 1.0}) {
    Centers<double> c(3, 4, alpha);
    c.c = random_tensor({3, 4}, rng, -3.0, 3.0);
    const auto x = random_tensor({12, 4}, rng);
    const auto labels = random_labels(12, 3, rng);
    auto gap = [&](const TensorD& centers) {
      double total = 0.0;
      for (int j = 0; j < 3; ++j) {
        std::vector<double> mean(4, 0.0);
        double n = 0;
        for (std::size_t i = 0; i < 12; ++i)
          if (labels[i] == j) {
            n += 1;
            for (std::size_t q = 0; q < 4; ++q) mean[q] += x.at(i, q);
          }
        if (n == 0) continue;
        for (std::size_t q = 0; q < 4; ++q) {
          const double diff = centers.at(static_cast<std::size_t>(j), q) - mean[q] / n;
          total += diff * diff;
        }
      }
      return total;
    };
    EXPECT_LT(gap(center_update(x, labels, c).c), gap(c.c)) << alpha;
  }
}

TEST(CenterUpdate, AlphaBounds) {
  EXPECT_THROW(Centers<float>(8, 4, 1.5f), ValueError);
  EXPECT_THROW(Centers<float>(8, 4, -0.1f), ValueError);
  EXPECT_NO_THROW(Centers<float>(8, 4, 0.0f));
  EXPECT_NO_THROW(Centers<float>(8, 4, 1.0f));
}

TEST(JointLoss, LambdaZeroIsSoftmaxAlone) {
  std::mt19937_64 rng(6);
  const auto z = random_tensor({5, 8}, rng);
  const auto x = random_tensor({5, 4}, rng);
  const auto labels = random_labels(5, 8, rng);
  Centers<double> c(8, 4, 0.5);
  c.c = random_tensor({8, 4}, rng);
  const auto j = joint_loss(z, x, labels, c, LossConfig{0.0, Reduction::Mean});
  EXPECT_EQ(j.total, cross_entropy(softmax(z), labels, Reduction::Mean));
  EXPECT_EQ(j.grad_logits, softmax_ce_backward(z, labels, Reduction::Mean));
  for (double v : j.grad_features.data()) EXPECT_EQ(v, 0.0);
}

TEST(JointLoss, FeaturesAtCentersGiveSoftmaxLoss) {
  std::mt19937_64 rng(7);
  const auto z = random_tensor({3, 8}, rng);
  const std::vector<int> labels = {1, 5, 1};
  Centers<double> c(8, 2, 0.5);
  c.c = random_tensor({8, 2}, rng);
  TensorD x({3, 2});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t q = 0; q < 2; ++q) x.at(i, q) = c.c.at(static_cast<std::size_t>(labels[i]), q);
  for (double lambda : {0.01, 1.0, 100.0}) {
    const auto j = joint_loss(z, x, labels, c, LossConfig{lambda, Reduction::Mean});
    EXPECT_EQ(j.total, cross_entropy(softmax(z), labels, Reduction::Mean));
  }
}

TEST(JointLoss, LambdaWeightsCenterTerm) {
  std::mt19937_64 rng(8);
  const auto z = random_tensor({4, 8}, rng);
  const auto x = random_tensor({4, 3}, rng);
  const auto labels = random_labels(4, 8, rng);
  Centers<double> c(8, 3, 0.5);
  const auto j = joint_loss(z, x, labels, c, LossConfig{0.25, Reduction::Sum});
  EXPECT_NEAR(j.total, j.softmax + 0.25 * j.center, 1e-15);
  EXPECT_EQ(j.center, center_loss(x, labels, c, Reduction::Sum));
  const auto g = center_loss_grad(x, labels, c, Reduction::Sum);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(j.grad_features[i], 0.25 * g[i], 1e-15);
  EXPECT_THROW((LossConfig{-1.0, Reduction::Mean}.validate()), ValueError);
}

TEST(JointLoss, GradientsMatchFiniteDifferences) {
  for (auto seed : kSeeds) EXPECT_LT(oracle::check_joint_loss(seed).error, 1e-4) << "seed " << seed;
}
