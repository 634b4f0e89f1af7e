#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <tbb/task_arena.h>

#include "amc/common/error.hpp"
#include "amc/nn/activations.hpp"
#include "amc/nn/msnet.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace amc;
using namespace amc::nn;
using oracle::random_tensor;

namespace {

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

Tensor random_batch(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tensor({m, 2, n}, rng).cast<float>();
}

// conv -> BN -> ReLU from the primitives, independent of conv_bn_relu_forward.
TensorD block(const ConvBnRelu<double>& b, const TensorD& x) {
  BatchNormCache<double> cache;
  return relu(batchnorm_forward(b.bn, conv1d_forward(b.conv, x), Mode::Train, &cache));
}

}  // namespace

TEST(MsModule, ComposedFromPrimitives) {
  std::mt19937_64 rng(21);
  auto m = make_ms_module<double>(2, 6, 5);
  visit_module("m", m, [&](const std::string&, TensorD& t, ParamKind k) {
    if (k == ParamKind::Weight || k == ParamKind::Bias || k == ParamKind::BnBeta) t = random_tensor(t.shape(), rng);
  });
  const auto x = random_tensor({3, 2, 20}, rng);
  MsModuleCache<double> cache;
  const auto y = ms_module_forward(m, x, Mode::Train, &cache);
  ASSERT_EQ(y.shape(), (Shape{3, 20, 10}));

  const auto reduced = block(m.reduce, x);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto spatial = block(m.branches[i].spatial, reduced);
    EXPECT_EQ(spatial.dim(2), reduced.dim(2)) << "same padding keeps the length";
    const auto branch = block(m.branches[i].gather, spatial);
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 5; ++c)
        for (std::size_t t = 0; t < 10; ++t) EXPECT_NEAR(y.at(b, i * 5 + c, t), branch.at(b, c, t), 1e-12);
  }
}

TEST(MsModule, BranchKernels) {
  const auto m = make_ms_module<float>(2, 32, 32);
  EXPECT_EQ(m.out_channels(), 128u);
  EXPECT_EQ(m.reduce.conv.kernel_size(), 3u);
  EXPECT_EQ(m.reduce.conv.stride, 2u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m.branches[i].spatial.conv.kernel_size(), kBranchKernels[i]);
    EXPECT_EQ(m.branches[i].spatial.conv.padding, (kBranchKernels[i] - 1) / 2);
    EXPECT_EQ(m.branches[i].gather.conv.kernel_size(), 1u);
  }
}

TEST(MsModule, GradientsMatchFiniteDifferences) {
  for (auto seed : kSeeds) EXPECT_LT(oracle::check_ms_module(seed).error, 1e-4) << "seed " << seed;
}

TEST(MSNet, LayerShapesForStandardFrame) {
  const auto p = init_msnet<float>(MSNetConfig{}, 1);
  const auto out = msnet_forward(p, random_batch(2, 128, 1), Mode::Train);
  EXPECT_EQ(out.cache.ms2.reduce.input.shape(), (Shape{2, 128, 64}));
  EXPECT_EQ(out.cache.pooled_length, 32u);
  EXPECT_EQ(out.cache.pooled.shape(), (Shape{2, 128}));
  EXPECT_EQ(out.cache.fc_out.shape(), (Shape{2, 128}));
  EXPECT_EQ(out.features.shape(), (Shape{2, 128}));
  EXPECT_EQ(out.logits.shape(), (Shape{2, 8}));
  MsModuleCache<float> c1, c2;
  const auto y1 = ms_module_forward(p.ms1, random_batch(2, 128, 2), Mode::Train, &c1);
  EXPECT_EQ(y1.shape(), (Shape{2, 128, 64}));
  EXPECT_EQ(ms_module_forward(p.ms2, y1, Mode::Train, &c2).shape(), (Shape{2, 128, 32}));
}

TEST(MSNet, AnyFrameLengthGivesSameHeads) {
  const auto p = init_msnet<float>(MSNetConfig{}, 2);
  for (std::size_t n : {64u, 128u, 256u, 8u, 100u}) {
    const auto out = msnet_forward(p, random_batch(3, n, n), Mode::Infer);
    EXPECT_EQ(out.features.shape(), (Shape{3, 128})) << n;
    EXPECT_EQ(out.logits.shape(), (Shape{3, 8})) << n;
  }
  EXPECT_THROW(msnet_forward(p, random_batch(3, 4, 1), Mode::Infer), ShapeError);
  EXPECT_THROW(msnet_forward(p, Tensor({3, 3, 32}), Mode::Infer), ShapeError);
}

TEST(MSNet, ZeroClassifierGivesZeroLogits) {
  auto p = init_msnet<float>(MSNetConfig{}, 3);
  p.classifier.weight.fill(0.0f);
  const auto out = msnet_forward(p, random_batch(4, 128, 3), Mode::Infer);
  for (float v : out.logits.data()) EXPECT_EQ(v, 0.0f);
}

TEST(MSNet, FeatureReluIsConfigurable) {
  MSNetConfig c;
  auto p = init_msnet<float>(c, 4);
  p.fc.bias.fill(-0.05f);
  const auto x = random_batch(8, 64, 4);
  auto on = msnet_forward(p, x, Mode::Infer);
  for (float v : on.features.data()) EXPECT_GE(v, 0.0f);
  p.config.feature_relu = false;
  auto off = msnet_forward(p, x, Mode::Infer);
  bool any_negative = false;
  for (float v : off.features.data()) any_negative |= v < 0.0f;
  EXPECT_TRUE(any_negative);
}

TEST(MSNet, TrainModeNeedsTwoFramesInferDoesNot) {
  const auto p = init_msnet<float>(MSNetConfig{}, 5);
  EXPECT_THROW(msnet_forward(p, random_batch(1, 128, 5), Mode::Train), ValueError);
  EXPECT_NO_THROW(msnet_forward(p, random_batch(1, 128, 5), Mode::Infer));
}

TEST(MSNet, InferIsPerFrame) {
  const auto p = init_msnet<float>(MSNetConfig{}, 6);
  const auto x = random_batch(3, 32, 6);
  const auto all = msnet_forward(p, x, Mode::Infer).logits;
  for (std::size_t i = 0; i < 3; ++i) {
    Tensor one({1, 2, 32});
    std::copy_n(x.raw() + i * 64, 64, one.raw());
    const auto l = msnet_forward(p, one, Mode::Infer).logits;
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(l[k], all.at(i, k), 1e-5);
  }
}

TEST(MSNet, DeterministicRegardlessOfThreads) {
  const auto p = init_msnet<float>(MSNetConfig{}, 7);
  const auto x = random_batch(20, 128, 7);
  const auto a = msnet_forward(p, x, Mode::Train);
  MSNetOutput<float> b;
  tbb::task_arena single(1);
  single.execute([&] { b = msnet_forward(p, x, Mode::Train); });
  EXPECT_EQ(a.logits, b.logits);
  EXPECT_EQ(a.features, b.features);
  const auto ga = msnet_backward(p, a.cache, a.logits, &a.features);
  MSNetParams<float> gb;
  single.execute([&] { gb = msnet_backward(p, b.cache, b.logits, &b.features); });
  std::vector<std::pair<std::string, Tensor>> ta, tb;
  visit_tensors(ga, [&](const std::string& n, const Tensor& t, ParamKind) { ta.emplace_back(n, t); });
  visit_tensors(gb, [&](const std::string& n, const Tensor& t, ParamKind) { tb.emplace_back(n, t); });
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) EXPECT_TRUE(ta[i].second == tb[i].second) << ta[i].first;
}

TEST(MSNet, InitIsSeededKaimingUniform) {
  const auto a = init_msnet<float>(MSNetConfig{}, 9);
  const auto b = init_msnet<float>(MSNetConfig{}, 9);
  const auto c = init_msnet<float>(MSNetConfig{}, 10);
  EXPECT_EQ(a.fc.weight, b.fc.weight);
  EXPECT_NE(a.fc.weight, c.fc.weight);
  visit_tensors(a, [&](const std::string& name, const Tensor& t, ParamKind k) {
    if (k == ParamKind::Weight) {
      const std::size_t fan_in = t.rank() == 3 ? t.dim(1) * t.dim(2) : t.dim(0);
      const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
      for (float v : t.data()) ASSERT_LE(std::abs(v), bound) << name;
    } else if (k == ParamKind::Bias || k == ParamKind::BnBeta || k == ParamKind::BnRunningMean) {
      for (float v : t.data()) ASSERT_EQ(v, 0.0f) << name;
    } else {
      for (float v : t.data()) ASSERT_EQ(v, 1.0f) << name;
    }
  });
}

TEST(MSNet, ParameterNamesUniqueAndTrainableCount) {
  const auto p = init_msnet<float>(MSNetConfig{}, 1);
  std::set<std::string> names;
  std::size_t count = 0;
  visit_tensors(p, [&](const std::string& n, const Tensor&, ParamKind) {
    names.insert(n);
    ++count;
  });
  EXPECT_EQ(names.size(), count);
  // per module: reduce 2*32*3+32, branches sum_k 32*32*k+32 and 4 gathers 32*32+32, BN 2*C per conv
  const std::size_t ms1 = (2 * 32 * 3 + 32) + (32 * 32 * 16 + 4 * 32) + 4 * (32 * 32 + 32) + 9 * 64;
  const std::size_t ms2 = (128 * 32 * 3 + 32) + (32 * 32 * 16 + 4 * 32) + 4 * (32 * 32 + 32) + 9 * 64;
  EXPECT_EQ(trainable_count(p), ms1 + ms2 + (128 * 128 + 128) + (128 * 8 + 8));
}

TEST(MSNet, GradientsMatchFiniteDifferences) {
  for (auto seed : kSeeds) EXPECT_LT(oracle::check_msnet(seed).error, 1e-4) << "seed " << seed;
}

TEST(MSNet, BackwardRejectsInferCache) {
  const auto p = init_msnet<float>(MSNetConfig{}, 1);
  const auto out = msnet_forward(p, random_batch(2, 32, 1), Mode::Infer);
  EXPECT_THROW(msnet_backward(p, out.cache, out.logits), ValueError);
}
