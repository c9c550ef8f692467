#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "turbo/tensor.hpp"

namespace turbo {

// One multi-modal example: a pre-embedded vector per modality plus a label.
struct PairedSample {
  std::string id;
  std::vector<double> e_a;
  std::vector<double> e_t;
  std::size_t label = 0;
};

enum class Provenance { synthetic, imported };

struct Dataset {
  std::vector<PairedSample> samples;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::size_t num_classes = 0;
  Provenance provenance = Provenance::synthetic;

  std::size_t size() const { return samples.size(); }
  void validate() const;
};

// Latent-prototype generator: every class owns a latent point, both modal
// embeddings are fixed linear images of it plus independent Gaussian noise.
struct SyntheticConfig {
  std::size_t num_classes = 4;
  std::size_t samples_per_class = 500;
  std::size_t latent_dim = 8;
  std::size_t d1 = 32;
  std::size_t d2 = 32;
  double noise_sigma = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

Dataset generate_synthetic(const SyntheticConfig& config);

// Line-delimited JSON: a header record {d1, d2, C, count} followed by one
// record per sample. Floats survive a round trip bit-exactly.
void save_pairs(const Dataset& dataset, const std::string& path);
Dataset load_pairs(const std::string& path);

// Rotation split: fold f tests on chunk f, validates on chunk (f+1) mod k,
// trains on the rest.
struct FoldPlan {
  struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
  };
  std::vector<Fold> folds;
};

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

// Single shuffled train/validation/test split (REJ-style fixed partitions).
FoldPlan make_fixed_split(std::size_t n, double train_frac, double val_frac, std::uint64_t seed);

// Seeded shuffle of `indices` chopped into batches of `batch_size`.
// drop_last discards a trailing partial batch.
std::vector<std::vector<std::size_t>> batch_iter(std::span<const std::size_t> indices,
                                                 std::size_t batch_size, std::uint64_t shuffle_seed,
                                                 bool drop_last);

// Batch assembly into [m x d1] / [m x d2] tensors plus labels.
Tensor gather_audio(const Dataset& dataset, std::span<const std::size_t> indices);
Tensor gather_text(const Dataset& dataset, std::span<const std::size_t> indices);
std::vector<std::size_t> gather_labels_of(const Dataset& dataset, std::span<const std::size_t> indices);

}  // namespace turbo
