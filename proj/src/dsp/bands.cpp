// dsp/bands.cpp

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

#include "daeme/dsp/bands.hpp"

namespace daeme::dsp {

void BandSplitSpec::validate() const {
  if (low_first != 1) throw Error("band split: low band must start at bin 1");
  if (!(low_first <= high_first && high_first <= low_last && low_last <= high_last))
    throw Error("band split: spans must overlap and cover every bin");
}

double BandSplitSpec::low_weight(int bin) const {
  if (bin < high_first) return 1.0;
  if (bin > low_last) return 0.0;
  if (low_last == high_first) return 1.0;
  return static_cast<double>(low_last - bin) / static_cast<double>(low_last - high_first);
}

std::pair<Matrix, Matrix> spectral_split(const Matrix& lps, const BandSplitSpec& spec) {
  spec.validate();
  if (lps.cols() != spec.total())
    throw Error("spectral_split: expected " + std::to_string(spec.total()) + "-dim frames, got " +
                std::to_string(lps.cols()));
  Matrix low = lps.middleCols(spec.low_first - 1, spec.low_width());
  Matrix high = lps.middleCols(spec.high_first - 1, spec.high_width());
  return {std::move(low), std::move(high)};
}

Matrix spectral_merge(const Matrix& low, const Matrix& high, const BandSplitSpec& spec) {
  spec.validate();
  if (low.cols() != spec.low_width() || high.cols() != spec.high_width() || low.rows() != high.rows())
    throw Error("spectral_merge: band shapes do not match the split spec");
  Matrix out(low.rows(), spec.total());
  for (int b = 1; b <= spec.total(); ++b) {
    const int c = b - 1;
    const double w = spec.low_weight(b);
    if (w == 1.0) {
      out.col(c) = low.col(b - spec.low_first);
    } else if (w == 0.0) {
      out.col(c) = high.col(b - spec.high_first);
    } else {
      const auto lo = low.col(b - spec.low_first);
      const auto hi = high.col(b - spec.high_first);
      out.col(c) = hi + w * (lo - hi);
    }
  }
  return out;
}

LpsFeatures spectral_merge(const Matrix& low, const Matrix& high, const LpsFeatures& like,
                           const BandSplitSpec& spec) {
  LpsFeatures out = like;
  out.frames = spectral_merge(low, high, spec);
  return out;
}

}  // namespace daeme::dsp
