#include "nashflow/simplex.h"

#include <cmath>

#include <gtest/gtest.h>

#include "nashflow/errors.h"
#include "nashflow/random.h"

using namespace nashflow;

TEST(Simplex, AcceptsValidVector) {
  Simplex s({0.25, 0.75});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[1], 0.75);
}

TEST(Simplex, StoresExactSumsBitForBit) {
  const std::vector<double> v{0.1, 0.2, 0.7};
  EXPECT_EQ(Simplex(v).values(), v);
}

TEST(Simplex, RenormalizesSmallDrift) {
  Simplex s({0.5 + 5e-10, 0.5});
  EXPECT_NEAR(s[0] + s[1], 1.0, 1e-15);
}

TEST(Simplex, ClampsTinyNegatives) {
  Simplex s({-5e-10, 1.0 + 5e-10});
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 1.0, 1e-15);
}

TEST(Simplex, RejectsInvalid) {
  EXPECT_THROW(Simplex({}), InvalidInputError);
  EXPECT_THROW(Simplex({0.5, 0.6}), InvalidInputError);
  EXPECT_THROW(Simplex({-0.1, 1.1}), InvalidInputError);
  EXPECT_THROW(Simplex({std::nan(""), 1.0}), InvalidInputError);
}

TEST(Simplex, UniformAndVertex) {
  EXPECT_EQ(Simplex::Uniform(4)[3], 0.25);
  EXPECT_EQ(Simplex::Vertex(3, 2).values(), (std::vector<double>{0, 0, 1}));
  EXPECT_THROW(Simplex::Vertex(3, 3), InvalidInputError);
}

TEST(Simplex, EnsureFloorOnlyWhenNeeded) {
  const Simplex interior({0.3, 0.7});
  EXPECT_EQ(EnsureFloor(interior, 1e-6), interior);
  const Simplex v = EnsureFloor(Simplex::Vertex(2, 0), 1e-6);
  EXPECT_DOUBLE_EQ(v[0], (1 - 2e-6) + 1e-6);
  EXPECT_DOUBLE_EQ(v[1], 1e-6);
}

TEST(Simplex, Distances) {
  const std::vector<double> a{0.2, 0.8}, b{0.5, 0.5};
  EXPECT_DOUBLE_EQ(L1Distance(a, b), 0.6);
  EXPECT_DOUBLE_EQ(LinfDistance(a, b), 0.3);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  auto a = PlayerStream(7, StreamPurpose::kActionSample, 0, 3);
  auto b = PlayerStream(7, StreamPurpose::kActionSample, 0, 3);
  auto c = PlayerStream(7, StreamPurpose::kActionSample, 1, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(3);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = r.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, CategoricalFrequencies) {
  Rng r(11);
  std::vector<int> hits(3, 0);
  for (int k = 0; k < 60000; ++k) ++hits[r.Categorical({0.2, 0.0, 0.8})];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[0] / 60000.0, 0.2, 0.01);
}
