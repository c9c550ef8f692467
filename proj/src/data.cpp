#include "turbo/data.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "turbo/error.hpp"
#include "turbo/rng.hpp"

namespace turbo {

using nlohmann::json;

void Dataset::validate() const {
  if (samples.empty()) throw ContractError("empty dataset");
  if (d1 == 0 || d2 == 0 || num_classes < 2) {
    throw SchemaError("dataset needs d1 >= 1, d2 >= 1 and at least two classes");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.e_a.size() != d1 || s.e_t.size() != d2) {
      throw SchemaError("sample " + std::to_string(i) + " (" + s.id + ") has embedding dims " +
                        std::to_string(s.e_a.size()) + "/" + std::to_string(s.e_t.size()) +
                        ", dataset declares " + std::to_string(d1) + "/" + std::to_string(d2));
    }
    if (s.label >= num_classes) {
      throw SchemaError("sample " + std::to_string(i) + " has label " + std::to_string(s.label) +
                        " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

void SyntheticConfig::validate() const {
  if (num_classes < 2) throw ParameterError("synthetic data needs at least two classes");
  if (samples_per_class == 0 || latent_dim == 0 || d1 == 0 || d2 == 0) {
    throw ParameterError("synthetic counts and dims must be >= 1");
  }
  if (noise_sigma < 0.0) throw ParameterError("noise sigma must be >= 0");
}

Dataset generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  RngState proto_rng(config.seed, "synthetic/prototypes");
  RngState map_rng(config.seed, "synthetic/maps");
  RngState noise_rng(config.seed, "synthetic/noise");

  // Class prototypes in latent space.
  std::vector<std::vector<double>> prototypes(config.num_classes);
  for (auto& z : prototypes) {
    z.resize(config.latent_dim);
    for (double& v : z) v = proto_rng.next_normal();
  }
  // Fixed modality maps, scaled to keep embedding entries O(1).
  const double map_scale = 1.0 / std::sqrt(static_cast<double>(config.latent_dim));
  auto draw_map = [&](std::size_t rows) {
    std::vector<double> m(rows * config.latent_dim);
    for (double& v : m) v = map_rng.next_normal() * map_scale;
    return m;
  };
  std::vector<double> map_a = draw_map(config.d1);
  std::vector<double> map_t = draw_map(config.d2);

  auto embed = [&](const std::vector<double>& map, std::size_t rows, const std::vector<double>& z) {
    std::vector<double> e(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < config.latent_dim; ++j) acc += map[i * config.latent_dim + j] * z[j];
      e[i] = acc + config.noise_sigma * noise_rng.next_normal();
    }
    return e;
  };

  Dataset ds;
  ds.d1 = config.d1;
  ds.d2 = config.d2;
  ds.num_classes = config.num_classes;
  ds.provenance = Provenance::synthetic;
  ds.samples.reserve(config.num_classes * config.samples_per_class);
  for (std::size_t c = 0; c < config.num_classes; ++c) {
    for (std::size_t i = 0; i < config.samples_per_class; ++i) {
      PairedSample s;
      s.id = "c" + std::to_string(c) + "-" + std::to_string(i);
      s.label = c;
      s.e_a = embed(map_a, config.d1, prototypes[c]);
      s.e_t = embed(map_t, config.d2, prototypes[c]);
      ds.samples.push_back(std::move(s));
    }
  }
  ds.validate();
  return ds;
}

void save_pairs(const Dataset& dataset, const std::string& path) {
  dataset.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  json header = {{"d1", dataset.d1}, {"d2", dataset.d2}, {"C", dataset.num_classes},
                 {"count", dataset.size()}};
  out << header.dump() << "\n";
  for (const auto& s : dataset.samples) {
    json rec = {{"id", s.id}, {"label", s.label}, {"e_a", s.e_a}, {"e_t", s.e_t}};
    out << rec.dump() << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

namespace {

json parse_line(const std::string& line, std::size_t line_no) {
  json parsed = json::parse(line, nullptr, false);
  if (parsed.is_discarded()) {
    throw ParseError("malformed JSON record at line " + std::to_string(line_no));
  }
  return parsed;
}

template <typename T>
T field(const json& rec, const char* key, std::size_t line_no) {
  if (!rec.contains(key)) {
    throw ParseError("record at line " + std::to_string(line_no) + " is missing key '" + key + "'");
  }
  try {
    return rec.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError("record at line " + std::to_string(line_no) + " has a wrong type for key '" +
                     key + "'");
  }
}

}  // namespace

Dataset load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;

  Dataset ds;
  ds.provenance = Provenance::imported;
  bool have_header = false;
  std::size_t declared_count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec = parse_line(line, line_no);
    if (!have_header) {
      ds.d1 = field<std::size_t>(rec, "d1", line_no);
      ds.d2 = field<std::size_t>(rec, "d2", line_no);
      ds.num_classes = field<std::size_t>(rec, "C", line_no);
      declared_count = field<std::size_t>(rec, "count", line_no);
      have_header = true;
      continue;
    }
    PairedSample s;
    s.id = field<std::string>(rec, "id", line_no);
    s.label = field<std::size_t>(rec, "label", line_no);
    s.e_a = field<std::vector<double>>(rec, "e_a", line_no);
    s.e_t = field<std::vector<double>>(rec, "e_t", line_no);
    if (s.e_a.size() != ds.d1 || s.e_t.size() != ds.d2) {
      throw SchemaError("record at line " + std::to_string(line_no) + " has embedding dims " +
                        std::to_string(s.e_a.size()) + "/" + std::to_string(s.e_t.size()) +
                        ", header declares " + std::to_string(ds.d1) + "/" + std::to_string(ds.d2));
    }
    if (s.label >= ds.num_classes) {
      throw SchemaError("record at line " + std::to_string(line_no) + " has label " +
                        std::to_string(s.label) + " outside [0, " + std::to_string(ds.num_classes) + ")");
    }
    ds.samples.push_back(std::move(s));
  }
  if (!have_header || ds.samples.empty()) throw ContractError("empty dataset: " + path);
  if (declared_count != ds.size()) {
    throw SchemaError("header declares " + std::to_string(declared_count) + " records, file has " +
                      std::to_string(ds.size()));
  }
  ds.validate();
  return ds;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, RngState& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Fisher-Yates with our own stream; std::shuffle is not cross-platform stable.
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 3) throw ContractError("make_folds: need k >= 3 so train/validation/test are disjoint");
  if (n < k) throw ContractError("make_folds: n=" + std::to_string(n) + " smaller than k=" + std::to_string(k));
  RngState rng(seed, "folds");
  std::vector<std::size_t> idx = shuffled_indices(n, rng);

  // Chunk boundaries: the first n % k chunks get one extra element.
  std::vector<std::vector<std::size_t>> chunks(k);
  std::size_t base = n / k, extra = n % k, pos = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t len = base + (c < extra ? 1 : 0);
    chunks[c].assign(idx.begin() + pos, idx.begin() + pos + len);
    pos += len;
  }

  FoldPlan plan;
  plan.folds.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    auto& fold = plan.folds[f];
    fold.test = chunks[f];
    fold.validation = chunks[(f + 1) % k];
    for (std::size_t c = 0; c < k; ++c) {
      if (c == f || c == (f + 1) % k) continue;
      fold.train.insert(fold.train.end(), chunks[c].begin(), chunks[c].end());
    }
  }
  return plan;
}

FoldPlan make_fixed_split(std::size_t n, double train_frac, double val_frac, std::uint64_t seed) {
  if (train_frac <= 0.0 || val_frac <= 0.0 || train_frac + val_frac >= 1.0) {
    throw ParameterError("make_fixed_split: fractions must be positive and sum below 1");
  }
  if (n < 3) throw ContractError("make_fixed_split: need at least three samples");
  RngState rng(seed, "fixed-split");
  std::vector<std::size_t> idx = shuffled_indices(n, rng);
  auto n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
  auto n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n));
  n_train = std::max<std::size_t>(1, std::min(n_train, n - 2));
  n_val = std::max<std::size_t>(1, std::min(n_val, n - n_train - 1));

  FoldPlan plan;
  plan.folds.resize(1);
  auto& fold = plan.folds[0];
  fold.train.assign(idx.begin(), idx.begin() + n_train);
  fold.validation.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  fold.test.assign(idx.begin() + n_train + n_val, idx.end());
  return plan;
}

std::vector<std::vector<std::size_t>> batch_iter(std::span<const std::size_t> indices,
                                                 std::size_t batch_size, std::uint64_t shuffle_seed,
                                                 bool drop_last) {
  if (batch_size == 0) throw ParameterError("batch_iter: batch size must be >= 1");
  RngState rng(shuffle_seed, "batches");
  std::vector<std::size_t> order = shuffled_indices(indices.size(), rng);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < indices.size(); start += batch_size) {
    std::size_t end = std::min(indices.size(), start + batch_size);
    if (drop_last && end - start < batch_size) break;
    std::vector<std::size_t> batch;
    batch.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) batch.push_back(indices[order[i]]);
    batches.push_back(std::move(batch));
  }
  return batches;
}

namespace {

Tensor gather_embeddings(const Dataset& dataset, std::span<const std::size_t> indices, bool audio) {
  if (indices.empty()) throw ContractError("gather: empty index list");
  const std::size_t d = audio ? dataset.d1 : dataset.d2;
  std::vector<double> values;
  values.reserve(indices.size() * d);
  for (std::size_t idx : indices) {
    if (idx >= dataset.size()) throw ContractError("gather: index " + std::to_string(idx) + " out of range");
    const auto& v = audio ? dataset.samples[idx].e_a : dataset.samples[idx].e_t;
    values.insert(values.end(), v.begin(), v.end());
  }
  return Tensor::from_data({indices.size(), d}, std::move(values), false);
}

}  // namespace

Tensor gather_audio(const Dataset& dataset, std::span<const std::size_t> indices) {
  return gather_embeddings(dataset, indices, true);
}

Tensor gather_text(const Dataset& dataset, std::span<const std::size_t> indices) {
  return gather_embeddings(dataset, indices, false);
}

std::vector<std::size_t> gather_labels_of(const Dataset& dataset, std::span<const std::size_t> indices) {
  std::vector<std::size_t> labels;
  labels.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= dataset.size()) throw ContractError("gather: index " + std::to_string(idx) + " out of range");
    labels.push_back(dataset.samples[idx].label);
  }
  return labels;
}

}  // namespace turbo
