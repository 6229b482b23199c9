#include "correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csvio.hpp"
#include "error.hpp"
#include "threads.hpp"

namespace cellscape {

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

CorrTransform parse_corr_transform(const std::string& s) {
  if (s == "none") return CorrTransform::none;
  if (s == "log10p1") return CorrTransform::log10p1;
  throw input_error("unknown transform '" + s + "' (want none|log10p1)");
}

bool CorrMatrix::masked(int64_t i, int64_t j) const { return std::isnan(at(i, j)); }

namespace {

std::string bin_label(const VolumeTensor& t, int64_t b) {
  const CivilMinute c = t.bin_time(b);
  const int64_t jd = day_of_year(c, t.t0.year);
  char buf[32];
  if (t.resolution == Resolution::day)
    std::snprintf(buf, sizeof(buf), "%lld", (long long)jd);
  else
    std::snprintf(buf, sizeof(buf), "%lld:%02d", (long long)jd, c.hour);
  return buf;
}

}  // namespace

CorrMatrix spatial_corr_matrix(const VolumeTensor& t, CorrTransform tf) {
  const int64_t S = t.n_sectors(), B = t.n_bins;
  require_input(S >= 3, "spatial correlation needs at least 3 sectors");
  require_input(B >= 2, "spatial correlation needs at least 2 bins");

  CorrMatrix c;
  c.resolution = t.resolution;
  c.t0 = t.t0;
  c.n_bins = B;
  c.labels.reserve(size_t(B));
  for (int64_t b = 0; b < B; ++b) c.labels.push_back(bin_label(t, b));

  // Constant bins have zero variance; detect on the raw integers (the
  // transform is monotone) so rounding in the mean cannot unmask them.
  std::vector<uint8_t> constant(size_t(B), 1);
  for (int64_t b = 0; b < B; ++b) {
    const int64_t v0 = t.at(0, b);
    for (int64_t s = 1; s < S; ++s)
      if (t.at(s, b) != v0) {
        constant[size_t(b)] = 0;
        break;
      }
  }

  // Centered value matrix, sector-major so one sector row streams at a time.
  std::vector<double> centered(size_t(S) * size_t(B));
  std::vector<double> mean(size_t(B), 0.0);
  for (int64_t s = 0; s < S; ++s)
    for (int64_t b = 0; b < B; ++b) {
      double v = double(t.at(s, b));
      if (tf == CorrTransform::log10p1) v = std::log10(v + 1.0);
      centered[size_t(s * B + b)] = v;
      mean[size_t(b)] += v;
    }
  for (int64_t b = 0; b < B; ++b) mean[size_t(b)] /= double(S);
  for (int64_t s = 0; s < S; ++s)
    for (int64_t b = 0; b < B; ++b) centered[size_t(s * B + b)] -= mean[size_t(b)];

  // Gram matrix in parallel tiles; each tile sums over all sectors in index
  // order, so the result is independent of the thread count.
  std::vector<double> gram(size_t(B) * size_t(B), 0.0);
  const int64_t tile = 64;
  const int64_t n_tiles_i = (B + tile - 1) / tile;
  std::vector<std::pair<int64_t, int64_t>> tiles;
  for (int64_t ti = 0; ti < n_tiles_i; ++ti)
    for (int64_t tj = ti; tj < n_tiles_i; ++tj) tiles.push_back({ti, tj});

  parallel_chunks(int64_t(tiles.size()), [&](int64_t tb, int64_t te) {
    for (int64_t w = tb; w < te; ++w) {
      const auto [ti, tj] = tiles[size_t(w)];
      const int64_t i0 = ti * tile, i1 = std::min(B, i0 + tile);
      const int64_t j0 = tj * tile, j1 = std::min(B, j0 + tile);
      for (int64_t s = 0; s < S; ++s) {
        const double* row = centered.data() + size_t(s * B);
        for (int64_t i = i0; i < i1; ++i) {
          const double vi = row[i];
          if (vi == 0.0) continue;
          double* g = gram.data() + size_t(i * B);
          const int64_t js = std::max(j0, i);
          for (int64_t j = js; j < j1; ++j) g[j] += vi * row[j];
        }
      }
    }
  });

  std::vector<double> norm(size_t(B), 0.0);
  for (int64_t b = 0; b < B; ++b) norm[size_t(b)] = std::sqrt(gram[size_t(b * B + b)]);

  c.m.assign(size_t(B) * size_t(B), kNaN);
  for (int64_t i = 0; i < B; ++i) {
    if (constant[size_t(i)] != 0) continue;
    c.m[size_t(i * B + i)] = 1.0;
    for (int64_t j = i + 1; j < B; ++j) {
      if (constant[size_t(j)] != 0) continue;
      double r = gram[size_t(i * B + j)] / (norm[size_t(i)] * norm[size_t(j)]);
      require_internal(std::abs(r) <= 1.0 + 1e-12, "correlation beyond [-1,1] (rounding bound)");
      r = std::clamp(r, -1.0, 1.0);
      c.m[size_t(i * B + j)] = r;
      c.m[size_t(j * B + i)] = r;
    }
  }
  return c;
}

double disruption_score(const CorrMatrix& c, int64_t bin) {
  require_input(bin >= 0 && bin < c.n_bins, "bin out of range");
  double sum = 0.0;
  int64_t n = 0;
  for (int64_t j = 0; j < c.n_bins; ++j) {
    if (j == bin || c.masked(bin, j)) continue;
    sum += c.at(bin, j);
    ++n;
  }
  if (n == 0) return kNaN;
  return 1.0 - sum / double(n);
}

void write_corr_csv(const std::string& path, const CorrMatrix& c) {
  AtomicWriter w(path);
  w.append("bin");
  for (const std::string& l : c.labels) w.appendf(",%s", l.c_str());
  w.append("\n");
  for (int64_t i = 0; i < c.n_bins; ++i) {
    w.appendf("%s", c.labels[size_t(i)].c_str());
    for (int64_t j = 0; j < c.n_bins; ++j) {
      if (c.masked(i, j))
        w.append(",NA");
      else
        w.appendf(",%.8g", c.at(i, j));
    }
    w.append("\n");
  }
  w.commit();
}

void write_disruption_csv(const std::string& path, const CorrMatrix& c) {
  AtomicWriter w(path);
  w.append("bin,disruption\n");
  for (int64_t i = 0; i < c.n_bins; ++i) {
    const double d = disruption_score(c, i);
    if (std::isnan(d))
      w.appendf("%s,NA\n", c.labels[size_t(i)].c_str());
    else
      w.appendf("%s,%.8g\n", c.labels[size_t(i)].c_str(), d);
  }
  w.commit();
}

}  // namespace cellscape
