#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "iiotsec/nn/model.hpp"

namespace iiotsec::nn {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes);
  ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts);

  void add(std::size_t truth, std::size_t predicted, std::uint64_t n = 1);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const;
  std::size_t num_classes() const noexcept { return n_; }
  std::uint64_t total() const noexcept;
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct MetricsReport {
  ConfusionMatrix confusion{2};
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

/// precision = TP/(TP+FP), recall = TP/(TP+FN), F1 = 2PR/(P+R); any zero
/// denominator yields 0. Macro averages are unweighted class means.
MetricsReport compute_metrics(const ConfusionMatrix& confusion);

using Predictor = std::function<std::size_t(std::span<const double>)>;

/// Confusion over `samples` using a reentrant predictor. Work is split over
/// `threads` workers (0 = hardware concurrency); integer counts make the
/// reduction order-independent.
ConfusionMatrix confusion_of(const Predictor& predict, std::span<const LabeledSample> samples,
                             std::size_t num_classes, std::size_t threads = 0);

MetricsReport evaluate(const CnnModel& model, std::span<const LabeledSample> samples, std::size_t threads = 0);

}  // namespace iiotsec::nn
