#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "statedge/noise.hpp"

using namespace statedge;

namespace {

std::size_t count_not_equal(const GrayImage& img, std::uint8_t v) {
  std::size_t n = 0;
  for (auto p : img.pixels()) n += p != v;
  return n;
}

}  // namespace

TEST(SaltPepper, ZeroDensityIsIdentity) {
  std::mt19937_64 rng{1};
  const auto img = oracle::random_image(rng, 5, 30);
  EXPECT_EQ(add_salt_pepper(img, {0.0, 0.5, 99}), img);
}

TEST(SaltPepper, FullDensityOnlyExtremes) {
  std::mt19937_64 rng{2};
  const auto img = oracle::random_image(rng, 5, 30);
  for (double ratio : {0.0, 0.3, 1.0}) {
    const auto noisy = add_salt_pepper(img, {1.0, ratio, 3});
    for (auto p : noisy.pixels()) EXPECT_TRUE(p == 0 || p == 255);
  }
  const auto salt = add_salt_pepper(img, {1.0, 1.0, 3});
  for (auto p : salt.pixels()) EXPECT_EQ(p, 255);
  const auto pepper = add_salt_pepper(img, {1.0, 0.0, 3});
  for (auto p : pepper.pixels()) EXPECT_EQ(p, 0);
}

TEST(SaltPepper, TenPercentBand) {
  const auto img = oracle::constant_image(128, 128, 128);
  const auto noisy = add_salt_pepper(img, {0.10, 0.5, 42});
  const double frac = static_cast<double>(count_not_equal(noisy, 128)) / img.size();
  EXPECT_GE(frac, 0.08);
  EXPECT_LE(frac, 0.12);
}

TEST(SaltPepper, DeterministicAndSeedSensitive) {
  const auto img = oracle::constant_image(64, 64, 100);
  EXPECT_EQ(add_salt_pepper(img, {0.2, 0.5, 7}), add_salt_pepper(img, {0.2, 0.5, 7}));
  EXPECT_NE(add_salt_pepper(img, {0.2, 0.5, 7}), add_salt_pepper(img, {0.2, 0.5, 8}));
}

TEST(SaltPepper, UncorruptedPixelsUntouched) {
  std::mt19937_64 rng{4};
  const auto img = oracle::random_image(rng, 20, 40);
  const auto noisy = add_salt_pepper(img, {0.3, 0.5, 11});
  // Same stream on a mid-gray image reveals which positions were hit.
  const auto probe = add_salt_pepper(oracle::constant_image(img.width(), img.height(), 128),
                                     {0.3, 0.5, 11});
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (probe.pixels()[i] == 128) {
      EXPECT_EQ(noisy.pixels()[i], img.pixels()[i]);
    } else {
      EXPECT_EQ(noisy.pixels()[i], probe.pixels()[i]);
    }
  }
}

// Follows the documented generator contract step by step.
TEST(SaltPepper, MatchesDocumentedStream) {
  const auto img = oracle::constant_image(17, 13, 90);
  const NoiseSpec spec{0.25, 0.4, 123456789};
  std::mt19937_64 gen{spec.seed};
  GrayImage expected = img;
  for (auto& p : expected.pixels()) {
    const double u1 = static_cast<double>(gen() >> 11) / 9007199254740992.0;
    const double u2 = static_cast<double>(gen() >> 11) / 9007199254740992.0;
    if (u1 < spec.density) p = u2 < spec.salt_ratio ? 255 : 0;
  }
  EXPECT_EQ(add_salt_pepper(img, spec), expected);
}

TEST(SaltPepper, CorruptedFractionWithinFourSigma) {
  const auto img = oracle::constant_image(128, 128, 128);
  const double n = static_cast<double>(img.size());
  for (double p : {0.02, 0.10, 0.30, 0.50}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const double measured = count_not_equal(add_salt_pepper(img, {p, 0.5, seed}), 128) / n;
      EXPECT_LE(std::abs(measured - p), 4.0 * std::sqrt(p * (1.0 - p) / n))
          << "p=" << p << " seed=" << seed;
    }
  }
}

TEST(SaltPepper, SaltRatioRespected) {
  const auto img = oracle::constant_image(128, 128, 128);
  const auto noisy = add_salt_pepper(img, {0.5, 0.25, 9});
  std::size_t salt = 0, pepper = 0;
  for (auto p : noisy.pixels()) {
    salt += p == 255;
    pepper += p == 0;
  }
  const double frac = static_cast<double>(salt) / static_cast<double>(salt + pepper);
  EXPECT_NEAR(frac, 0.25, 0.03);
}

TEST(SaltPepper, RejectsInvalidSpec) {
  const auto img = oracle::constant_image(4, 4, 1);
  EXPECT_THROW(add_salt_pepper(img, {-0.1, 0.5, 0}), std::invalid_argument);
  EXPECT_THROW(add_salt_pepper(img, {1.1, 0.5, 0}), std::invalid_argument);
  EXPECT_THROW(add_salt_pepper(img, {0.1, 1.5, 0}), std::invalid_argument);
}
