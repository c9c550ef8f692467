#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "turbo/dropout.hpp"
#include "turbo/rng.hpp"
#include "turbo/tensor.hpp"

namespace turbo {

// Desk-scale modality encoder: a small tanh MLP over precomputed embedding
// vectors, followed by an affine projection into the joint space. Dropout
// (inverted scaling) follows every feed-forward layer except the final
// projection output.
struct EncoderConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims = {128};
  std::size_t joint_dim = 64;
  double dropout_p = 0.2;  // in [0, 1)

  void validate() const;
};

struct MlpEncoder {
  struct Layer {
    Tensor weight;  // [in x out]
    Tensor bias;    // [out]
  };
  std::vector<Layer> layers;
  double dropout_p = 0.0;

  std::size_t input_dim() const { return layers.front().weight.shape()[0]; }
  std::size_t output_dim() const { return layers.back().weight.shape()[1]; }
};

// Trainable fully-connected map into the joint multi-modal space.
struct ProjectionHead {
  Tensor weight;  // [in x d]
  Tensor bias;    // [d]

  std::size_t joint_dim() const { return weight.shape()[1]; }
};

// Linear classifier over the concatenated pair representation.
struct ClassifierHead {
  Tensor weight;  // [2d x C]
  Tensor bias;    // [C]
  std::size_t num_classes = 0;
};

// The four projected representations produced by two dropout-masked passes.
struct RepresentationQuad {
  Tensor h_a1, h_t1, h_a2, h_t2;  // each [N x d]
};

struct ModalityModel {
  MlpEncoder encoder;
  ProjectionHead projection;
};

struct ModelSet {
  ModalityModel audio;
  ModalityModel text;
  ClassifierHead classifier;
  double dropout_p = 0.2;
};

// Named slot into a model's parameter tensor, used by the optimizer and the
// snapshot writer. Iteration order is fixed.
struct NamedParam {
  std::string name;
  Tensor* tensor;
};

MlpEncoder init_encoder(const EncoderConfig& config, RngState& rng);
ProjectionHead init_projection(std::size_t input_dim, std::size_t joint_dim, RngState& rng);
ClassifierHead init_classifier(std::size_t joint_dim, std::size_t num_classes, RngState& rng);

// Builds both modality towers plus the classifier from one seeded stream.
ModelSet init_model_set(const EncoderConfig& audio_cfg, const EncoderConfig& text_cfg,
                        std::size_t num_classes, RngState& rng);

std::vector<NamedParam> model_parameters(ModelSet& models);

// h = projection(encoder(x)); train_mode samples a fresh mask after every
// hidden layer, eval mode applies none.
Tensor encode(const Tensor& x, const MlpEncoder& enc, const ProjectionHead& head, bool train_mode,
              RngState& rng);

// Two train-mode passes with independent mask streams ("pass1", "pass2").
RepresentationQuad dual_forward(const Tensor& audio, const Tensor& text, const ModelSet& models,
                                const RngState& rng);

// row_softmax(concat(h_a, h_t) . W + b); concatenation order is audio first.
Tensor classify(const Tensor& h_a, const Tensor& h_t, const ClassifierHead& head);

}  // namespace turbo
