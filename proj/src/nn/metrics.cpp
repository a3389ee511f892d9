#include "iiotsec/nn/metrics.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

#include "iiotsec/common/error.hpp"

namespace iiotsec::nn {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes) : n_(num_classes), counts_(num_classes * num_classes) {
  if (num_classes < 2) throw ConfigError("confusion matrix needs at least two classes");
}

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts)
    : n_(num_classes), counts_(std::move(counts)) {
  if (num_classes < 2 || counts_.size() != n_ * n_) throw DataError("confusion matrix: bad dimensions");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t n) {
  if (truth >= n_ || predicted >= n_) throw DataError("confusion matrix: label out of range");
  counts_[truth * n_ + predicted] += n;
}

std::uint64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  return counts_.at(truth * n_ + predicted);
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw DataError("confusion matrix: class count mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

MetricsReport compute_metrics(const ConfusionMatrix& confusion) {
  const std::size_t n = confusion.num_classes();
  MetricsReport r;
  r.confusion = confusion;
  r.per_class.resize(n);
  std::uint64_t correct = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::uint64_t tp = confusion.at(c, c);
    std::uint64_t predicted = 0, actual = 0;
    for (std::size_t k = 0; k < n; ++k) {
      predicted += confusion.at(k, c);
      actual += confusion.at(c, k);
    }
    correct += tp;
    ClassMetrics& m = r.per_class[c];
    m.support = actual;
    m.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
    m.recall = actual == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  r.macro_precision /= static_cast<double>(n);
  r.macro_recall /= static_cast<double>(n);
  r.macro_f1 /= static_cast<double>(n);
  const std::uint64_t total = confusion.total();
  r.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  return r;
}

ConfusionMatrix confusion_of(const Predictor& predict, std::span<const LabeledSample> samples,
                             std::size_t num_classes, std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, samples.size() / 64));
  std::vector<ConfusionMatrix> partial(threads, ConfusionMatrix(num_classes));
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](std::size_t t) {
    try {
      for (std::size_t i = t; i < samples.size(); i += threads)
        partial[t].add(samples[i].label, predict(samples[i].features));
    } catch (...) {
      failures[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  ConfusionMatrix total(num_classes);
  for (const auto& p : partial) total += p;
  return total;
}

MetricsReport evaluate(const CnnModel& model, std::span<const LabeledSample> samples, std::size_t threads) {
  const Predictor predict = [&model](std::span<const double> x) { return model.predict(x); };
  return compute_metrics(confusion_of(predict, samples, model.config().num_classes(), threads));
}

}  // namespace iiotsec::nn
