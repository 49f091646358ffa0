#include <gtest/gtest.h>

#include <random>

#include "exunit/number_ring.hpp"

using namespace exunit;

namespace {

RingElement random_element(std::mt19937_64& rng, std::size_t n, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  RingElement r;
  for (std::size_t i = 0; i < n; ++i) r.coords.emplace_back(d(rng));
  return r;
}

std::vector<NumberRing> sample_rings() {
  return {make_number_ring({0, 1}), make_number_ring({1, 0, 1}), make_number_ring({5, 0, 1}),
          make_number_ring({-2, 0, 0, 1}), make_number_ring({1, -1, 0, 0, 1})};
}

}  // namespace

TEST(NumberRing, ConstructionAndDegree) {
  EXPECT_EQ(make_number_ring({0, 1}).degree(), 1u);
  EXPECT_EQ(make_number_ring({5, 0, 1}).degree(), 2u);
}

TEST(NumberRing, RejectsBadMinimalPolynomials) {
  auto code = [](std::vector<Integer> g) {
    try {
      make_number_ring(std::move(g));
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidConfig;
  };
  EXPECT_EQ(code({-1, 0, 1}), Errc::Reducible);
  EXPECT_EQ(code({0, 0, 1}), Errc::Reducible);
  EXPECT_EQ(code({5, 0, 2}), Errc::NotMonic);
  EXPECT_EQ(code({1}), Errc::ZeroDegree);
  EXPECT_EQ(code({}), Errc::ZeroDegree);
  EXPECT_EQ(code({-6, 1, 1}), Errc::Reducible);
}

TEST(NumberRing, MultiplicationExamples) {
  const auto R = make_number_ring({5, 0, 1});
  EXPECT_EQ(R.mul(make_element({0, 1}), make_element({0, 1})), make_element({-5, 0}));
  EXPECT_EQ(R.mul(make_element({1, 1}), make_element({1, -1})), make_element({6, 0}));
  EXPECT_EQ(R.add(make_element({1, 2}), make_element({3, -2})), make_element({4, 0}));
}

TEST(NumberRing, NormExamples) {
  const auto R = make_number_ring({5, 0, 1});
  EXPECT_EQ(R.norm(make_element({3, 0})), 9);
  EXPECT_EQ(R.norm(make_element({1, 1})), 6);
  EXPECT_EQ(R.norm(make_element({0, 1})), 5);
}

TEST(NumberRing, DimensionMismatch) {
  const auto R = make_number_ring({5, 0, 1});
  try {
    R.add(make_element({1, 2, 3}), make_element({1, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(NumberRing, RingAxiomsOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (const auto& R : sample_rings()) {
    for (int it = 0; it < 60; ++it) {
      const auto a = random_element(rng, R.degree(), 40);
      const auto b = random_element(rng, R.degree(), 40);
      const auto c = random_element(rng, R.degree(), 40);
      EXPECT_EQ(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)));
      EXPECT_EQ(R.add(R.add(a, b), c), R.add(a, R.add(b, c)));
      EXPECT_EQ(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)));
      EXPECT_EQ(R.mul(a, b), R.mul(b, a));
      EXPECT_EQ(R.add(a, b), R.add(b, a));
      EXPECT_EQ(R.mul(a, R.one()), a);
      EXPECT_EQ(R.add(a, R.neg(a)), R.zero());
      EXPECT_EQ(R.sub(a, b), R.add(a, R.neg(b)));
    }
  }
}

TEST(NumberRing, NormIsMultiplicative) {
  std::mt19937_64 rng(12);
  for (const auto& R : sample_rings()) {
    for (int it = 0; it < 40; ++it) {
      const auto a = random_element(rng, R.degree(), 25);
      const auto b = random_element(rng, R.degree(), 25);
      EXPECT_EQ(R.norm(R.mul(a, b)), R.norm(a) * R.norm(b));
    }
  }
}

TEST(NumberRing, ThetaSatisfiesMinimalPolynomial) {
  for (const auto& R : sample_rings()) {
    RingElement acc = R.zero();
    RingElement power = R.one();
    for (const auto& c : R.min_poly()) {
      acc = R.add(acc, R.scale(power, c));
      power = R.mul(power, R.theta());
    }
    EXPECT_EQ(acc, R.zero());
  }
}

TEST(NumberRing, PowMatchesRepeatedMultiplication) {
  const auto R = make_number_ring({-2, 0, 0, 1});
  const auto a = make_element({1, -1, 2});
  RingElement acc = R.one();
  for (unsigned e = 0; e < 9; ++e) {
    EXPECT_EQ(R.pow(a, e), acc);
    acc = R.mul(acc, a);
  }
}

TEST(NumberRing, ParseElement) {
  const auto R = make_number_ring({5, 0, 1});
  EXPECT_EQ(parse_element("[3, -1]", R), make_element({3, -1}));
  EXPECT_EQ(parse_element("7", R), make_element({7, 0}));
  EXPECT_THROW(parse_element("[1,2,3]", R), Error);
  EXPECT_THROW(parse_element("[1,x]", R), Error);
}
