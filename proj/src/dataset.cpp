#include <staleperc/dataset.hpp>

#include <staleperc/csv.hpp>
#include <staleperc/random.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace staleperc {

Shard make_shard(const std::vector<Example>& examples, Eigen::Index dim) {
  Shard shard;
  shard.features.resize(dim, static_cast<Eigen::Index>(examples.size()));
  shard.labels.reserve(examples.size());
  for (std::size_t j = 0; j < examples.size(); ++j) {
    if (examples[j].x.size() != dim) throw ContractError("make_shard: example dimension mismatch");
    shard.features.col(static_cast<Eigen::Index>(j)) = examples[j].x;
    shard.labels.push_back(examples[j].y);
  }
  return shard;
}

namespace {

VectorXd gaussian_vector(Eigen::Index dim, SplitMix64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = normal(rng);
  return v;
}

VectorXd unit_vector(Eigen::Index dim, SplitMix64& rng) {
  VectorXd v;
  double n = 0.0;
  do {
    v = gaussian_vector(dim, rng);
    n = v.norm();
  } while (n == 0.0);
  return v / n;
}

}  // namespace

Dataset generate_dataset(const GenerateOptions& opt) {
  if (opt.dim <= 0) throw ContractError("generate_dataset: dim must be positive");
  if (opt.num_clients == 0 || opt.examples_per_client == 0) {
    throw ContractError("generate_dataset: num_clients and examples_per_client must be positive");
  }
  if (!(opt.target_margin > 0.0) || !(opt.radius > 0.0)) {
    throw ContractError("generate_dataset: margin and radius must be positive");
  }
  if (!(opt.target_margin < opt.radius)) {
    throw ContractError("generate_dataset: target margin must be smaller than the radius");
  }

  SplitMix64 witness_rng = make_stream(opt.seed, Purpose::kWitness);
  VectorXd witness = unit_vector(opt.dim, witness_rng);
  // Exact unit norm after rounding is not guaranteed; renormalize once more.
  witness /= witness.norm();

  const std::size_t total = opt.num_clients * opt.examples_per_client;
  SplitMix64 rng = make_stream(opt.seed, Purpose::kExamples);
  const double inv_dim = 1.0 / static_cast<double>(opt.dim);

  std::vector<Example> pool;
  pool.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    bool accepted = false;
    for (std::uint64_t attempt = 0; attempt < opt.attempt_budget; ++attempt) {
      const VectorXd dir = unit_vector(opt.dim, rng);
      const double r = opt.radius * std::pow(rng.uniform(), inv_dim);
      VectorXd x = r * dir;
      const double proj = witness.dot(x);
      if (std::abs(proj) < opt.target_margin || x.norm() > opt.radius) continue;
      pool.push_back({std::move(x), proj > 0.0 ? 1 : -1});
      accepted = true;
      break;
    }
    if (!accepted) {
      throw GenerationError("generate_dataset: rejection budget exhausted; target margin " +
                            format_real(opt.target_margin) + " too close to radius " +
                            format_real(opt.radius));
    }
  }

  if (opt.partition == Partition::kLabelSkewed) {
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Example& a, const Example& b) { return a.y > b.y; });
  }

  std::vector<Shard> clients;
  clients.reserve(opt.num_clients);
  for (std::size_t i = 0; i < opt.num_clients; ++i) {
    const auto first = pool.begin() + static_cast<std::ptrdiff_t>(i * opt.examples_per_client);
    std::vector<Example> part(first, first + static_cast<std::ptrdiff_t>(opt.examples_per_client));
    clients.push_back(make_shard(part, opt.dim));
  }
  return Dataset(std::move(clients), std::move(witness));
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << dataset.dim() << ' ' << dataset.num_clients() << ' ' << format_real(dataset.certified_margin())
      << ' ' << format_real(dataset.certified_radius()) << '\n';
  for (std::size_t i = 0; i < dataset.num_clients(); ++i) {
    const Shard& shard = dataset.client(i);
    for (std::size_t j = 0; j < shard.size(); ++j) {
      out << i << ' ' << shard.labels[j];
      const auto x = shard.features.col(static_cast<Eigen::Index>(j));
      for (Eigen::Index k = 0; k < x.size(); ++k) out << ' ' << format_real(x(k));
      out << '\n';
    }
  }
  for (Eigen::Index k = 0; k < dataset.dim(); ++k) {
    if (k > 0) out << ' ';
    out << format_real(dataset.witness()(k));
  }
  out << '\n';
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_dataset(out, dataset);
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset read_dataset(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_whitespace(line);
    if (!fields.empty()) lines.push_back(std::move(fields));
  }
  if (lines.size() < 2) throw IoError("dataset: missing header or witness line");

  const auto& head = lines.front();
  if (head.size() != 4) throw IoError("dataset: header must be `D m margin radius`");
  const long long dim = parse_integer(head[0]);
  const long long m = parse_integer(head[1]);
  if (dim <= 0 || m <= 0) throw IoError("dataset: header dimension and client count must be positive");
  const double margin = parse_real(head[2]);
  const double radius = parse_real(head[3]);

  std::vector<std::vector<Example>> per_client(static_cast<std::size_t>(m));
  for (std::size_t l = 1; l + 1 < lines.size(); ++l) {
    const auto& f = lines[l];
    if (f.size() != static_cast<std::size_t>(dim) + 2) {
      throw IoError("dataset: line " + std::to_string(l + 1) + " has wrong field count");
    }
    const long long client = parse_integer(f[0]);
    if (client < 0 || client >= m) throw IoError("dataset: client index out of range");
    Example ex;
    ex.y = static_cast<int>(parse_integer(f[1]));
    ex.x.resize(dim);
    for (long long k = 0; k < dim; ++k) ex.x(k) = parse_real(f[static_cast<std::size_t>(k) + 2]);
    per_client[static_cast<std::size_t>(client)].push_back(std::move(ex));
  }
  const auto& wline = lines.back();
  if (wline.size() != static_cast<std::size_t>(dim)) throw IoError("dataset: witness line has wrong length");
  VectorXd witness(dim);
  for (long long k = 0; k < dim; ++k) witness(k) = parse_real(wline[static_cast<std::size_t>(k)]);

  std::vector<Shard> clients;
  for (const auto& examples : per_client) clients.push_back(make_shard(examples, dim));
  try {
    Dataset ds(std::move(clients), std::move(witness));
    if (ds.certified_margin() != margin || ds.certified_radius() != radius) {
      throw IoError("dataset: header certificate does not match the data");
    }
    return ds;
  } catch (const ContractError& e) {
    throw IoError(std::string("dataset: ") + e.what());
  }
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_dataset(in);
}

}  // namespace staleperc
