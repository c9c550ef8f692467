#include "turbo/encoder.hpp"

#include <cmath>

#include "turbo/error.hpp"

namespace turbo {

namespace {

// Glorot-uniform weights, zero biases.
MlpEncoder::Layer init_layer(std::size_t fan_in, std::size_t fan_out, RngState& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> w(fan_in * fan_out);
  for (double& v : w) v = rng.uniform_in(-bound, bound);
  MlpEncoder::Layer layer;
  layer.weight = Tensor::from_data({fan_in, fan_out}, std::move(w), true);
  layer.bias = Tensor::zeros({fan_out}, true);
  return layer;
}

}  // namespace

void EncoderConfig::validate() const {
  if (input_dim == 0 || joint_dim == 0) throw ParameterError("encoder dims must be >= 1");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw ParameterError("encoder hidden dims must be >= 1");
  }
  if (dropout_p < 0.0 || dropout_p >= 1.0) {
    throw ParameterError("encoder dropout must lie in [0, 1), got " + std::to_string(dropout_p));
  }
}

MlpEncoder init_encoder(const EncoderConfig& config, RngState& rng) {
  config.validate();
  MlpEncoder enc;
  enc.dropout_p = config.dropout_p;
  std::size_t in = config.input_dim;
  for (std::size_t out : config.hidden_dims) {
    enc.layers.push_back(init_layer(in, out, rng));
    in = out;
  }
  if (enc.layers.empty()) throw ParameterError("encoder needs at least one hidden layer");
  return enc;
}

ProjectionHead init_projection(std::size_t input_dim, std::size_t joint_dim, RngState& rng) {
  auto layer = init_layer(input_dim, joint_dim, rng);
  return ProjectionHead{layer.weight, layer.bias};
}

ClassifierHead init_classifier(std::size_t joint_dim, std::size_t num_classes, RngState& rng) {
  if (num_classes < 2) throw ParameterError("classifier needs at least two classes");
  auto layer = init_layer(2 * joint_dim, num_classes, rng);
  return ClassifierHead{layer.weight, layer.bias, num_classes};
}

ModelSet init_model_set(const EncoderConfig& audio_cfg, const EncoderConfig& text_cfg,
                        std::size_t num_classes, RngState& rng) {
  if (audio_cfg.joint_dim != text_cfg.joint_dim) {
    throw ParameterError("audio and text towers must share the joint dimension");
  }
  ModelSet m;
  RngState audio_rng = rng.stream("init/audio");
  RngState text_rng = rng.stream("init/text");
  RngState cls_rng = rng.stream("init/classifier");
  m.audio.encoder = init_encoder(audio_cfg, audio_rng);
  m.audio.projection = init_projection(audio_cfg.hidden_dims.back(), audio_cfg.joint_dim, audio_rng);
  m.text.encoder = init_encoder(text_cfg, text_rng);
  m.text.projection = init_projection(text_cfg.hidden_dims.back(), text_cfg.joint_dim, text_rng);
  m.classifier = init_classifier(audio_cfg.joint_dim, num_classes, cls_rng);
  m.dropout_p = audio_cfg.dropout_p;
  return m;
}

std::vector<NamedParam> model_parameters(ModelSet& models) {
  std::vector<NamedParam> params;
  auto add_tower = [&params](const std::string& prefix, ModalityModel& tower) {
    for (std::size_t i = 0; i < tower.encoder.layers.size(); ++i) {
      params.push_back({prefix + ".enc" + std::to_string(i) + ".weight", &tower.encoder.layers[i].weight});
      params.push_back({prefix + ".enc" + std::to_string(i) + ".bias", &tower.encoder.layers[i].bias});
    }
    params.push_back({prefix + ".proj.weight", &tower.projection.weight});
    params.push_back({prefix + ".proj.bias", &tower.projection.bias});
  };
  add_tower("audio", models.audio);
  add_tower("text", models.text);
  params.push_back({"classifier.weight", &models.classifier.weight});
  params.push_back({"classifier.bias", &models.classifier.bias});
  return params;
}

Tensor encode(const Tensor& x, const MlpEncoder& enc, const ProjectionHead& head, bool train_mode,
              RngState& rng) {
  if (x.shape().size() != 2 || x.shape()[1] != enc.input_dim()) {
    throw DimensionError("encode: input column extent does not match encoder input dim " +
                         std::to_string(enc.input_dim()));
  }
  Tensor h = x;
  for (const auto& layer : enc.layers) {
    h = tanh(add_row_broadcast(matmul(h, layer.weight), layer.bias));
    if (train_mode && enc.dropout_p > 0.0) {
      h = apply_dropout(h, sample_dropout_mask(rng, h.shape(), enc.dropout_p));
    }
  }
  return add_row_broadcast(matmul(h, head.weight), head.bias);
}

RepresentationQuad dual_forward(const Tensor& audio, const Tensor& text, const ModelSet& models,
                                const RngState& rng) {
  if (audio.shape().size() != 2 || text.shape().size() != 2 || audio.shape()[0] != text.shape()[0]) {
    throw DimensionError("dual_forward: audio and text batches must share the batch extent");
  }
  RepresentationQuad quad;
  RngState r_a1 = rng.stream("pass1/audio");
  RngState r_t1 = rng.stream("pass1/text");
  RngState r_a2 = rng.stream("pass2/audio");
  RngState r_t2 = rng.stream("pass2/text");
  quad.h_a1 = encode(audio, models.audio.encoder, models.audio.projection, true, r_a1);
  quad.h_t1 = encode(text, models.text.encoder, models.text.projection, true, r_t1);
  quad.h_a2 = encode(audio, models.audio.encoder, models.audio.projection, true, r_a2);
  quad.h_t2 = encode(text, models.text.encoder, models.text.projection, true, r_t2);
  return quad;
}

Tensor classify(const Tensor& h_a, const Tensor& h_t, const ClassifierHead& head) {
  if (h_a.shape() != h_t.shape()) {
    throw DimensionError("classify: modality representations must share shape");
  }
  Tensor joint = concat_cols(h_a, h_t);
  if (joint.shape()[1] != head.weight.shape()[0]) {
    throw DimensionError("classify: concatenated extent " + std::to_string(joint.shape()[1]) +
                         " does not match classifier input " + std::to_string(head.weight.shape()[0]));
  }
  return row_softmax(add_row_broadcast(matmul(joint, head.weight), head.bias));
}

}  // namespace turbo
