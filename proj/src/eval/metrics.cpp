#include "amc/eval/metrics.hpp"

#include <algorithm>
#include <string>

#include "amc/common/error.hpp"

namespace amc::eval {

nn::Tensor stack_frames(const Dataset& dataset, std::span<const std::size_t> indices) {
  const std::size_t n = dataset.frame_len;
  nn::Tensor batch({indices.size(), 2, n});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& frame = dataset.frames.at(indices[i]);
    if (frame.samples.size() != 2 * n) throw ShapeError("stack_frames: frame length differs from dataset frame_len");
    std::copy(frame.samples.begin(), frame.samples.end(), batch.raw() + i * 2 * n);
  }
  return batch;
}

std::vector<int> argmax_rows(const nn::Tensor& logits) {
  nn::expect_rank(logits, 2, "argmax_rows");
  const std::size_t m = logits.dim(0), k = logits.dim(1);
  std::vector<int> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const float* row = logits.raw() + i * k;
    out[i] = static_cast<int>(std::max_element(row, row + k) - row);
  }
  return out;
}

std::vector<int> predict(const nn::MSNetParams<float>& params, const Dataset& dataset, std::size_t batch_size) {
  if (batch_size == 0) throw ValueError("predict: batch size must be >= 1");
  std::vector<int> out;
  out.reserve(dataset.size());
  std::vector<std::size_t> indices;
  for (std::size_t first = 0; first < dataset.size(); first += batch_size) {
    const std::size_t count = std::min(batch_size, dataset.size() - first);
    indices.resize(count);
    for (std::size_t i = 0; i < count; ++i) indices[i] = first + i;
    const auto result = nn::msnet_forward(params, stack_frames(dataset, indices), nn::Mode::Infer);
    const auto labels = argmax_rows(result.logits);
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

Metrics compute_metrics(std::span<const int> truth, std::span<const int> predicted, std::span<const int> snr_db,
                        std::size_t num_classes) {
  if (truth.size() != predicted.size() || truth.size() != snr_db.size()) {
    throw ValueError("compute_metrics: truth, predictions and snr tags differ in length");
  }
  Metrics m;
  m.total = truth.size();
  m.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  std::map<int, std::size_t> snr_correct;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= num_classes || static_cast<std::size_t>(p) >= num_classes) {
      throw ValueError("compute_metrics: class id out of range at sample " + std::to_string(i));
    }
    ++m.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    ++m.per_snr_count[snr_db[i]];
    if (t == p) {
      ++m.correct;
      ++snr_correct[snr_db[i]];
    }
  }
  m.overall_accuracy = m.total ? static_cast<double>(m.correct) / static_cast<double>(m.total) : 0.0;
  for (const auto& [snr, count] : m.per_snr_count) {
    m.per_snr_accuracy[snr] = static_cast<double>(snr_correct[snr]) / static_cast<double>(count);
  }
  return m;
}

Metrics evaluate(const nn::MSNetParams<float>& params, const Dataset& dataset) {
  if (dataset.empty()) throw ValueError("evaluate: empty dataset");
  const auto predicted = predict(params, dataset);
  std::vector<int> truth(dataset.size()), snr(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    truth[i] = dataset.frames[i].class_id;
    snr[i] = dataset.frames[i].snr_db;
  }
  return compute_metrics(truth, predicted, snr, params.config.num_classes);
}

}  // namespace amc::eval
