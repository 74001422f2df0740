#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "alcs/metrics.hpp"

using alcs::D8bv;

namespace {

std::vector<alcs::StepRecord> records_from_errors(const std::vector<int>& errors, int desired = 100) {
  std::vector<alcs::StepRecord> records;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    alcs::StepRecord r;
    r.k = static_cast<long>(k);
    r.e_desired = D8bv(desired);
    r.e_measured = D8bv::saturate(desired - errors[k]);
    r.eps = desired - r.e_measured.value();
    records.push_back(r);
  }
  return records;
}

} // namespace

TEST(BandReport, AllZeroErrors) {
  const auto rep = alcs::band_report(records_from_errors(std::vector<int>(1000, 0)), 200);
  EXPECT_EQ(rep.n_steady, 800);
  EXPECT_FALSE(rep.no_steady_state);
  EXPECT_EQ(rep.frac_in_wide, 1.0);
  EXPECT_EQ(rep.frac_in_narrow, 1.0);
  EXPECT_EQ(rep.frac_meas_in_perception, 1.0);
  EXPECT_EQ(rep.rms_eps, 0.0);
  EXPECT_EQ(rep.eps_min, 0);
  EXPECT_EQ(rep.eps_max, 0);
}

TEST(BandReport, ConstantTenIsOutsideBothBands) {
  const auto rep = alcs::band_report(records_from_errors(std::vector<int>(1000, 10)), 200);
  EXPECT_EQ(rep.frac_in_wide, 0.0);
  EXPECT_EQ(rep.frac_in_narrow, 0.0);
  EXPECT_EQ(rep.mean_abs_eps, 10.0);
  // Measured 90 is below the perception band.
  EXPECT_EQ(rep.frac_meas_in_perception, 0.0);
}

TEST(BandReport, AlternatingFive) {
  std::vector<int> errors;
  for (int k = 0; k < 1000; ++k) errors.push_back(k % 2 ? -5 : 5);
  const auto rep = alcs::band_report(records_from_errors(errors), 200);
  EXPECT_EQ(rep.frac_in_wide, 1.0);
  EXPECT_EQ(rep.frac_in_narrow, 1.0);
  EXPECT_DOUBLE_EQ(rep.rms_eps, 5.0);
  EXPECT_EQ(rep.eps_min, -5);
  EXPECT_EQ(rep.eps_max, 5);
}

TEST(BandReport, AsymmetricWideBand) {
  EXPECT_TRUE(alcs::kWideErrorBand.contains(-11));
  EXPECT_FALSE(alcs::kWideErrorBand.contains(-12));
  EXPECT_TRUE(alcs::kWideErrorBand.contains(9));
  EXPECT_FALSE(alcs::kWideErrorBand.contains(10));
}

TEST(ExtremeRarity, TenPercentBetweenBands) {
  std::vector<int> errors(1000, 0);
  for (int k = 0; k < 1000; k += 10) errors[k] = 8;
  EXPECT_NEAR(alcs::extreme_rarity(records_from_errors(errors), 0), 0.1, 1e-12);
}

TEST(BandReport, NoSteadyStateIsFlagged) {
  const auto rep = alcs::band_report(records_from_errors(std::vector<int>(50, 3)), 200);
  EXPECT_TRUE(rep.no_steady_state);
  EXPECT_EQ(rep.n_steady, 0);
  EXPECT_EQ(rep.frac_in_wide, 0.0);
  EXPECT_EQ(alcs::extreme_rarity(records_from_errors(std::vector<int>(50, 3)), 200), 0.0);
}

TEST(BandReport, PropertiesOnRandomStreams) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dist(-40, 40);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> errors(600);
    for (auto& e : errors) e = dist(rng);
    const auto rep = alcs::band_report(records_from_errors(errors), 100);
    EXPECT_LE(rep.frac_in_narrow, rep.frac_in_wide);
    EXPECT_GE(rep.frac_in_wide, 0.0);
    EXPECT_LE(rep.frac_in_wide, 1.0);
    EXPECT_LE(rep.mean_abs_eps, rep.rms_eps + 1e-12);
    // At desired 100, eps in [-7, 7] is exactly measured in [93, 107].
    const long in_perception = std::count_if(errors.begin() + 100, errors.end(),
                                             [](int e) { return e >= -7 && e <= 7; });
    EXPECT_DOUBLE_EQ(rep.frac_meas_in_perception, in_perception / 500.0);

    // Metrics ignore order within the steady window.
    std::vector<int> shuffled = errors;
    std::shuffle(shuffled.begin() + 100, shuffled.end(), rng);
    const auto rep2 = alcs::band_report(records_from_errors(shuffled), 100);
    EXPECT_DOUBLE_EQ(rep.frac_in_wide, rep2.frac_in_wide);
    EXPECT_DOUBLE_EQ(rep.frac_in_narrow, rep2.frac_in_narrow);
    EXPECT_NEAR(rep.rms_eps, rep2.rms_eps, 1e-12);
    EXPECT_EQ(rep.eps_min, rep2.eps_min);
    EXPECT_EQ(rep.eps_max, rep2.eps_max);
  }
}
