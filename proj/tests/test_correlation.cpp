#include <doctest.h>

#include <cmath>

#include "correlation.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "threads.hpp"

using namespace cellscape;

namespace {

const CivilMinute kT0{2011, 2, 1, 0, 0};

VolumeTensor daily(int sectors, int64_t days, uint64_t seed) {
  std::vector<std::string> ids;
  for (int s = 0; s < sectors; ++s) ids.push_back("s" + std::to_string(s));
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, ids, days);
  oracles::TestRng rng(seed);
  for (auto& v : t.counts) v = int64_t(rng.uniform() * 200.0);
  return t;
}

}  // namespace

TEST_CASE("hand-computed Pearson fixture: 3 sectors, 2 days") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 2);
  t.at(0, 0) = 1; t.at(0, 1) = 2;
  t.at(1, 0) = 2; t.at(1, 1) = 4;
  t.at(2, 0) = 3; t.at(2, 1) = 9;
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  const double expect = oracles::pearson({1, 2, 3}, {2, 4, 9});
  CHECK(expect == doctest::Approx(0.970725).epsilon(1e-5));  // frozen from the oracle
  CHECK(m.at(0, 1) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.at(0, 1) == m.at(1, 0));
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
}

TEST_CASE("identical bins correlate at exactly one") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 4);
  for (int64_t b = 0; b < 4; ++b) {
    t.at(0, b) = 5;
    t.at(1, b) = 9;
    t.at(2, b) = 1;
  }
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  for (int64_t i = 0; i < 4; ++i)
    for (int64_t j = 0; j < 4; ++j) CHECK(m.at(i, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("anti-correlated bins hit -1") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 2);
  t.at(0, 0) = 1; t.at(1, 0) = 5; t.at(2, 0) = 9;
  // bin1 = -bin0 + 10
  t.at(0, 1) = 9; t.at(1, 1) = 5; t.at(2, 1) = 1;
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  CHECK(m.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("zero-variance bins are masked, never zero") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 3);
  t.at(0, 0) = 1; t.at(1, 0) = 2; t.at(2, 0) = 3;
  for (int64_t s = 0; s < 3; ++s) t.at(s, 1) = 7;  // constant bin
  t.at(0, 2) = 3; t.at(1, 2) = 1; t.at(2, 2) = 2;
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  CHECK(m.masked(0, 1));
  CHECK(m.masked(1, 0));
  CHECK(m.masked(1, 1));
  CHECK_FALSE(m.masked(0, 2));
  const double d = disruption_score(m, 1);
  CHECK(std::isnan(d));
}

TEST_CASE("single-sector or single-bin tensors are rejected") {
  VolumeTensor t1 = make_tensor(Channel::calls, Resolution::day, kT0, {"a"}, 5);
  CHECK_THROWS_AS(spatial_corr_matrix(t1, CorrTransform::none), input_error);
  VolumeTensor t2 = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 1);
  CHECK_THROWS_AS(spatial_corr_matrix(t2, CorrTransform::none), input_error);
}

TEST_CASE("per-bin affine changes leave the row unchanged") {
  VolumeTensor t = daily(20, 12, 42);
  const CorrMatrix base = spatial_corr_matrix(t, CorrTransform::none);
  // Scale bin 3 of every sector by 4 (a power of two: exact in floating point).
  VolumeTensor scaled = t;
  for (int64_t s = 0; s < t.n_sectors(); ++s) scaled.at(s, 3) *= 4;
  const CorrMatrix ms = spatial_corr_matrix(scaled, CorrTransform::none);
  for (int64_t j = 0; j < base.n_bins; ++j) CHECK(ms.at(3, j) == base.at(3, j));
  // Add a constant to bin 5 of every sector.
  VolumeTensor shifted = t;
  for (int64_t s = 0; s < t.n_sectors(); ++s) shifted.at(s, 5) += 1000;
  const CorrMatrix mh = spatial_corr_matrix(shifted, CorrTransform::none);
  for (int64_t j = 0; j < base.n_bins; ++j)
    CHECK(mh.at(5, j) == doctest::Approx(base.at(5, j)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("exactly 7-day-periodic tensor gives a block-circulant matrix") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0,
                               {"a", "b", "c", "d", "e"}, 28);
  oracles::TestRng rng(5);
  for (int64_t s = 0; s < 5; ++s)
    for (int64_t d = 0; d < 7; ++d) {
      const int64_t v = int64_t(rng.uniform() * 100.0);
      for (int64_t rep = 0; rep < 4; ++rep) t.at(s, d + 7 * rep) = v;
    }
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  for (int64_t i = 0; i + 7 < 28; ++i)
    for (int64_t j = 0; j + 7 < 28; ++j) CHECK(m.at(i, j) == m.at(i + 7, j + 7));
}

TEST_CASE("gram tiling matches a brute-force Pearson matrix") {
  const VolumeTensor t = daily(17, 70, 9);
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::log10p1);
  oracles::TestRng pick(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int64_t i = int64_t(pick.uniform() * 70.0);
    const int64_t j = int64_t(pick.uniform() * 70.0);
    std::vector<double> vi, vj;
    for (int64_t s = 0; s < t.n_sectors(); ++s) {
      vi.push_back(std::log10(double(t.at(s, i)) + 1.0));
      vj.push_back(std::log10(double(t.at(s, j)) + 1.0));
    }
    if (i == j)
      CHECK(m.at(i, j) == 1.0);
    else
      CHECK(m.at(i, j) == doctest::Approx(oracles::pearson(vi, vj)).epsilon(1e-10));
  }
}

TEST_CASE("thread count does not change the matrix") {
  const VolumeTensor t = daily(30, 100, 31);
  set_thread_count(1);
  const CorrMatrix a = spatial_corr_matrix(t, CorrTransform::none);
  set_thread_count(5);
  const CorrMatrix b = spatial_corr_matrix(t, CorrTransform::none);
  set_thread_count(1);
  for (int64_t i = 0; i < a.n_bins; ++i)
    for (int64_t j = 0; j < a.n_bins; ++j) {
      if (a.masked(i, j))
        CHECK(b.masked(i, j));
      else
        CHECK(a.at(i, j) == b.at(i, j));
    }
}

TEST_CASE("disruption score of the all-ones matrix is zero") {
  VolumeTensor t = make_tensor(Channel::calls, Resolution::day, kT0, {"a", "b", "c"}, 5);
  for (int64_t b = 0; b < 5; ++b) {
    t.at(0, b) = 1;
    t.at(1, b) = 2;
    t.at(2, b) = 3;
  }
  const CorrMatrix m = spatial_corr_matrix(t, CorrTransform::none);
  for (int64_t bin = 0; bin < 5; ++bin)
    CHECK(disruption_score(m, bin) == doctest::Approx(0.0).epsilon(1e-12));
}
