// daeme/dsp/bands.hpp

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

#ifndef DAEME_DSP_BANDS_HPP_
#define DAEME_DSP_BANDS_HPP_

#include <utility>

#include "daeme/common.hpp"
#include "daeme/dsp/stft.hpp"

namespace daeme::dsp {

/// Overlapping low/high spans of a 257-bin LPS frame, 1-based inclusive.
struct BandSplitSpec {
  int low_first = 1;
  int low_last = 150;
  int high_first = 108;
  int high_last = 257;

  int low_width() const { return low_last - low_first + 1; }
  int high_width() const { return high_last - high_first + 1; }
  int total() const { return high_last; }
  /// Throws unless the spans cover 1..total() with a nonempty overlap.
  void validate() const;
  /// Crossfade weight of the low band at 1-based bin b: 1 at high_first,
  /// 0 at low_last, linear in between.
  double low_weight(int bin) const;
};

/// Pure column slicing; both outputs keep every row.
std::pair<Matrix, Matrix> spectral_split(const Matrix& lps, const BandSplitSpec& spec = {});

/// Low band below the overlap, high band above it, linear crossfade inside.
/// Computed as high + w * (low - high), so equal inputs merge exactly.
Matrix spectral_merge(const Matrix& low, const Matrix& high, const BandSplitSpec& spec = {});

/// LpsFeatures convenience overload; metadata is taken from `like`.
LpsFeatures spectral_merge(const Matrix& low, const Matrix& high, const LpsFeatures& like,
                           const BandSplitSpec& spec = {});

}  // namespace daeme::dsp

#endif  // DAEME_DSP_BANDS_HPP_
