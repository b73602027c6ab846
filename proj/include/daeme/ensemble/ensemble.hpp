// daeme/ensemble/ensemble.hpp

// Copyright 2026  The DAEME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DAEME_ENSEMBLE_ENSEMBLE_HPP_
#define DAEME_ENSEMBLE_ENSEMBLE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "daeme/corpus/corpus.hpp"
#include "daeme/dsdt/dsdt.hpp"
#include "daeme/dsp/bands.hpp"
#include "daeme/dsp/stft.hpp"
#include "daeme/nn/model.hpp"
#include "daeme/nn/train.hpp"

namespace daeme::ensemble {

using dsdt::Band;
using dsdt::SatMode;

/// Front-end settings shared by training and inference.
struct FeatureConfig {
  dsp::StftConfig stft;     ///< 512-point / 256 hop at 16 kHz
  dsp::BandSplitSpec ss;    ///< spectral segmentation spans
  int wd_fft_size = 256;    ///< STFT of each wavelet band (8 kHz)
  int wd_hop = 128;
  /// +-context frames stacked onto frame-wise component inputs.
  int context = 0;

  dsp::StftConfig wd_stft() const;
  /// Feature width of one band as seen by a component model (no context).
  int band_width(SatMode mode, Band band) const;
  void validate() const;
  nlohmann::json to_json() const;
  static FeatureConfig from_json(const nlohmann::json& j);
};

/// Everything derived from one waveform. The wavelet-band spectra are only
/// present when `has_wd` is set.
struct Analysis {
  corpus::Waveform wave;
  dsp::LpsFeatures lps;
  dsp::PhaseMatrix phase;
  bool has_wd = false;
  dsp::LpsFeatures wd_low, wd_high;
  dsp::PhaseMatrix wd_low_phase, wd_high_phase;
};

Analysis analyze(const corpus::Waveform& wave, const FeatureConfig& fc, bool with_wd);

/// Band-domain LPS of one branch input (SS slice, WD band spectrum or full).
Matrix band_features(const Analysis& a, SatMode mode, Band band, const FeatureConfig& fc);

/// Maps a node's band outputs back to T x 257 LPS aligned with `noisy.lps`.
/// SS pairs are crossfaded, WD pairs are resynthesized with the noisy band
/// phases, recombined by the inverse wavelet transform and re-analyzed.
/// With SatMode::None `high` is ignored and `low` is returned.
Matrix merge_node_output(const Analysis& noisy, SatMode mode, const Matrix& low, const Matrix& high,
                         const FeatureConfig& fc);

/// Stacks +-context neighbouring frames (edges replicated).
Matrix stack_context(const Matrix& x, int context);

/// Per-dimension z-score.
struct Normalizer {
  RowVector mean;
  RowVector scale;

  static Normalizer fit(const std::vector<Matrix>& data);
  static Normalizer identity(Eigen::Index dims);
  Matrix apply(const Matrix& x) const;
  Matrix invert(const Matrix& z) const;
};

/// One encoder branch: a model trained on a single node's subset.
struct ComponentModel {
  dsdt::Branch branch;
  nn::Model model;
  Normalizer in_norm, out_norm;
  std::vector<std::string> members;
  std::string subset_digest;
  bool warm_started = false;
  std::string init_digest;  ///< parameters before training
  std::vector<double> loss_curve;

  /// Raw band features in, raw band LPS out.
  Matrix apply(const Matrix& band_input, int context) const;
};

struct MultiBranchEncoder {
  dsdt::Dsdt tree;
  dsdt::PartitionPlan plan;
  FeatureConfig features;
  std::vector<ComponentModel> components;  ///< plan.branches() order
  /// Parent models trained only to initialize children; not encoder outputs.
  std::vector<ComponentModel> auxiliary;
};

/// One training or test utterance after analysis.
struct PreparedPair {
  std::string id;
  corpus::AttributeTag tag;
  Analysis noisy;
  Analysis clean;
};

std::vector<PreparedPair> prepare_pairs(const dsdt::PairList& pairs, const FeatureConfig& fc, bool with_wd,
                                        int jobs = 1);

enum class WarmStart { Auto, On, Off };

std::string_view to_string(WarmStart w);
WarmStart warm_start_from_string(std::string_view s);

struct ComponentOptions {
  nn::ModelSpec spec;  ///< in/out dims are replaced by the band widths
  nn::TrainConfig train;
  /// Auto: on for UAT trees, off otherwise. Children at depth >= 2 start
  /// from their parent's trained weights.
  WarmStart warm_start = WarmStart::Auto;
  int jobs = 1;
  std::uint64_t seed = 1;
};

/// Trains one model per plan branch on exactly its node's members.
MultiBranchEncoder train_components(const dsdt::Dsdt& tree, const dsdt::PartitionPlan& plan,
                                    const std::vector<PreparedPair>& train, const FeatureConfig& fc,
                                    const ComponentOptions& opt);

/// Band-domain outputs Z_{j,k}, one per branch, in plan order.
std::vector<Matrix> encode(const MultiBranchEncoder& enc, const Analysis& noisy);

/// Per selected node, the band-merged T x 257 LPS.
std::vector<Matrix> node_outputs(const MultiBranchEncoder& enc, const Analysis& noisy, const std::vector<Matrix>& z);

/// Concatenates per-node outputs frame by frame.
Matrix concat_columns(const std::vector<Matrix>& blocks);

/// Raw band MSE of a component on a set of pairs.
double component_mse(const MultiBranchEncoder& enc, const ComponentModel& comp,
                     const std::vector<const PreparedPair*>& pairs);

enum class DecoderKind { BF, LR, FC, CN };

std::string_view to_string(DecoderKind k);
DecoderKind decoder_kind_from_string(std::string_view s);

struct DecoderOptions {
  DecoderKind kind = DecoderKind::LR;
  double lambda = 1e-3;
  int width = 128;
  int channels = 16;
  nn::TrainConfig train;
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
  static DecoderOptions from_json(const nlohmann::json& j);
};

struct Decoder {
  DecoderKind kind = DecoderKind::LR;
  double lambda = 0.0;
  Eigen::Index in_dim = 0;
  Matrix W;  ///< LR: (in_dim + 1) x out, last row is the bias
  std::optional<nn::Model> net;
  Normalizer in_norm, out_norm;
};

/// Ridge least squares with a bias column, W = (lambda I + Y'Y)^-1 Y'X,
/// solved by QR of the stacked system [Y; sqrt(lambda) I] W = [X; 0].
Decoder fit_lr_decoder(const Matrix& z, const Matrix& x, double lambda);

/// FC (frame-wise) or CN (whole-utterance) decoder on z-scored inputs.
Decoder train_nn_decoder(const std::vector<Matrix>& z, const std::vector<Matrix>& x, const DecoderOptions& opt);

/// Runs encoder outputs for every training pair, then fits the decoder.
Decoder train_decoder(const MultiBranchEncoder& enc, const std::vector<PreparedPair>& train,
                      const DecoderOptions& opt, int jobs = 1);

/// LR/FC/CN decoding of concatenated node outputs.
Matrix decode(const Decoder& dec, const Matrix& zcat);

/// Index of the deepest selected node whose path matches the tag.
std::size_t bf_node(const MultiBranchEncoder& enc, const corpus::AttributeTag& tag);
/// Oracle selection: the matching node's band-merged output, unmodified.
Matrix decode_bf(const MultiBranchEncoder& enc, const std::vector<Matrix>& node_outs,
                 const corpus::AttributeTag& tag);

struct DaemeSystem {
  MultiBranchEncoder encoder;
  Decoder decoder;
  nlohmann::json provenance;
};

/// Enhanced T x 257 LPS. Bins at the LPS floor in the noisy input stay at
/// the floor. `tag` is consulted only by the BF decoder.
Matrix enhance_features(const DaemeSystem& sys, const Analysis& noisy, const corpus::AttributeTag* tag = nullptr);

/// Full pipeline with the noisy phase; output length equals input length.
corpus::Waveform enhance_utterance(const DaemeSystem& sys, const corpus::Waveform& noisy,
                                   const corpus::AttributeTag* tag = nullptr);

/// Bundle directory: system.json (tree, plan, features, decoder, provenance
/// and digests), arrays.bin (normalizers, LR weights), branch_<i>.bin and
/// decoder.bin checkpoints.
void save_system(const DaemeSystem& sys, const std::filesystem::path& dir);
DaemeSystem load_system(const std::filesystem::path& dir);

/// The encoder and decoder halves of a bundle, written into `dir` under the
/// same file names save_system uses.
void save_encoder(const MultiBranchEncoder& enc, const std::filesystem::path& dir);
MultiBranchEncoder load_encoder(const std::filesystem::path& dir);
void save_decoder(const Decoder& dec, const std::filesystem::path& dir);
Decoder load_decoder(const std::filesystem::path& dir);

/// Digests of every branch checkpoint, in plan order.
std::vector<std::string> encoder_digests(const MultiBranchEncoder& enc);

}  // namespace daeme::ensemble

#endif  // DAEME_ENSEMBLE_ENSEMBLE_HPP_
