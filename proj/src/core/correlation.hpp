#pragma once

#include <string>
#include <vector>

#include "volumes.hpp"

namespace cellscape {

enum class CorrTransform { none, log10p1 };
CorrTransform parse_corr_transform(const std::string& s);

// Time-bin x time-bin Pearson correlations of the across-sector volume
// vector. Zero-variance bins are masked (NaN), never reported as zero.
struct CorrMatrix {
  Resolution resolution = Resolution::day;
  CivilMinute t0;
  int64_t n_bins = 0;
  std::vector<std::string> labels;  // jd or jd:hh bin labels
  std::vector<double> m;            // row-major, NaN = masked

  double at(int64_t i, int64_t j) const { return m[size_t(i * n_bins + j)]; }
  bool masked(int64_t i, int64_t j) const;
};

CorrMatrix spatial_corr_matrix(const VolumeTensor& t, CorrTransform tf = CorrTransform::none);

// 1 - mean off-diagonal correlation of the bin's row (masked cells skipped);
// NaN when every off-diagonal cell is masked.
double disruption_score(const CorrMatrix& c, int64_t bin);

void write_corr_csv(const std::string& path, const CorrMatrix& c);
void write_disruption_csv(const std::string& path, const CorrMatrix& c);

}  // namespace cellscape
