#pragma once

#include <staleperc/core.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <vector>

namespace staleperc {

template <typename Scalar>
struct BasicExample {
  Vector<Scalar> x;
  int y = 1;
};

/// One client's examples, stored column-wise: column j of `features` is x_j.
template <typename Scalar>
struct BasicShard {
  Matrix<Scalar> features;
  std::vector<int> labels;

  Eigen::Index dim() const { return features.rows(); }
  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }

  BasicExample<Scalar> example(std::size_t j) const {
    return {features.col(static_cast<Eigen::Index>(j)), labels[j]};
  }
};

struct Certificate {
  double margin = 0.0;
  double radius = 0.0;
};

/// Examples partitioned across clients together with a unit witness separator
/// and the certified margin/radius pair, both computed from the data.
template <typename Scalar>
class BasicDataset {
 public:
  using Shard = BasicShard<Scalar>;

  BasicDataset() = default;

  // Builds the dataset and certifies it. Throws ContractError when the
  // witness does not separate the data or shapes disagree.
  BasicDataset(std::vector<Shard> clients, Vector<Scalar> witness);

  const std::vector<Shard>& clients() const { return clients_; }
  const Shard& client(std::size_t i) const { return clients_.at(i); }
  std::size_t num_clients() const { return clients_.size(); }
  Eigen::Index dim() const { return witness_.size(); }
  std::size_t total_size() const;

  const Vector<Scalar>& witness() const { return witness_; }
  double certified_margin() const { return certificate_.margin; }
  double certified_radius() const { return certificate_.radius; }
  const Certificate& certificate() const { return certificate_; }

  friend bool operator==(const BasicDataset& a, const BasicDataset& b) {
    if (a.witness_ != b.witness_ || a.clients_.size() != b.clients_.size()) return false;
    for (std::size_t i = 0; i < a.clients_.size(); ++i) {
      if (a.clients_[i].labels != b.clients_[i].labels) return false;
      if (a.clients_[i].features != b.clients_[i].features) return false;
    }
    return true;
  }

 private:
  std::vector<Shard> clients_;
  Vector<Scalar> witness_;
  Certificate certificate_;
};

using Example = BasicExample<double>;
using Shard = BasicShard<double>;
using Dataset = BasicDataset<double>;

/// Builds a shard from a list of examples. All must share one dimension.
Shard make_shard(const std::vector<Example>& examples, Eigen::Index dim);

/// Margin and radius of the dataset measured against its stored witness:
/// margin = min y<w*, x>, radius = max |x|. Throws ContractError on an empty
/// dataset or a nonpositive margin.
template <typename Scalar>
Certificate certify(const std::vector<BasicShard<Scalar>>& clients, const Vector<Scalar>& witness) {
  double margin = std::numeric_limits<double>::infinity();
  double radius = 0.0;
  std::size_t count = 0;
  for (const auto& shard : clients) {
    if (shard.dim() != witness.size() && !shard.empty()) {
      throw ContractError("certify: shard dimension does not match witness");
    }
    for (std::size_t j = 0; j < shard.size(); ++j) {
      const auto x = shard.features.col(static_cast<Eigen::Index>(j));
      const double m = static_cast<double>(shard.labels[j]) * static_cast<double>(witness.dot(x));
      margin = std::min(margin, m);
      radius = std::max(radius, static_cast<double>(x.norm()));
      ++count;
    }
  }
  if (count == 0) throw ContractError("certify: dataset is empty");
  if (!(margin > 0.0)) throw ContractError("certify: witness does not separate the data (margin <= 0)");
  return {margin, radius};
}

template <typename Scalar>
Certificate certify(const BasicDataset<Scalar>& dataset) {
  return certify(dataset.clients(), dataset.witness());
}

/// True iff y<w, x> > 0 for every example held by every client.
template <typename Scalar, typename Derived>
bool is_globally_correct(const Eigen::MatrixBase<Derived>& w, const BasicDataset<Scalar>& dataset) {
  if (w.size() != dataset.dim()) throw ContractError("is_globally_correct: dimension mismatch");
  for (const auto& shard : dataset.clients()) {
    if (shard.empty()) continue;
    // One matrix-vector product per shard.
    const Vector<Scalar> scores = shard.features.transpose() * w;
    for (std::size_t j = 0; j < shard.size(); ++j) {
      if (!(static_cast<Scalar>(shard.labels[j]) * scores(static_cast<Eigen::Index>(j)) > Scalar(0))) {
        return false;
      }
    }
  }
  return true;
}

enum class Partition { kBalanced, kLabelSkewed };

struct GenerateOptions {
  Eigen::Index dim = 2;
  std::size_t num_clients = 1;
  std::size_t examples_per_client = 1;
  double target_margin = 0.1;
  double radius = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t attempt_budget = 1'000'000;  // per example
  Partition partition = Partition::kBalanced;
};

/// Rejection sampler: uniform unit witness, candidates uniform in the ball of
/// the given radius, candidates inside the margin slab discarded, survivors
/// labelled by the witness side. Pure function of the options.
Dataset generate_dataset(const GenerateOptions& options);

// Text format: header `D m margin radius`, one line per example
// `client y x_1 ... x_D`, then a trailing witness line. Reals are written in
// shortest round-trip form.
void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

template <typename Scalar>
BasicDataset<Scalar>::BasicDataset(std::vector<Shard> clients, Vector<Scalar> witness)
    : clients_(std::move(clients)), witness_(std::move(witness)) {
  if (witness_.size() == 0) throw ContractError("dataset: zero-dimensional witness");
  if (std::abs(static_cast<double>(witness_.norm()) - 1.0) > 1e-9) {
    throw ContractError("dataset: witness must have unit norm");
  }
  for (const auto& shard : clients_) {
    if (shard.features.cols() != static_cast<Eigen::Index>(shard.labels.size())) {
      throw ContractError("dataset: feature/label count mismatch");
    }
    for (int y : shard.labels) {
      if (y != 1 && y != -1) throw ContractError("dataset: labels must be -1 or +1");
    }
  }
  certificate_ = certify(clients_, witness_);
}

template <typename Scalar>
std::size_t BasicDataset<Scalar>::total_size() const {
  std::size_t n = 0;
  for (const auto& shard : clients_) n += shard.size();
  return n;
}

}  // namespace staleperc
