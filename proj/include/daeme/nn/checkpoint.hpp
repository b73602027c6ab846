// daeme/nn/checkpoint.hpp

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

#ifndef DAEME_NN_CHECKPOINT_HPP_
#define DAEME_NN_CHECKPOINT_HPP_

#include <filesystem>

#include "json.hpp"

#include "daeme/nn/model.hpp"

namespace daeme::nn {

/// Binary checkpoint: 8-byte magic, u32 version, u32 arch tag, u32 in_dim,
/// u32 out_dim, u64 seed, u64 parameter count, then little-endian float64
/// parameters. A JSON sidecar `<path>.json` carries the full ModelSpec and
/// whatever training metadata the caller passes.
void save_model(const Model& model, const std::filesystem::path& path, const nlohmann::json& extra = {});
Model load_model(const std::filesystem::path& path);

/// SHA-256 of the parameter vector.
std::string model_digest(const Model& model);

}  // namespace daeme::nn

#endif  // DAEME_NN_CHECKPOINT_HPP_
