#include <gtest/gtest.h>

#include <random>
#include <set>

#include "exunit/enumerate.hpp"
#include "exunit/residue.hpp"

using namespace exunit;

namespace {

const NumberRing& R5() {
  static const NumberRing r = make_number_ring({5, 0, 1});
  return r;
}

PrimeFactor above(const NumberRing& R, long p, std::size_t i = 0) { return primes_above(R, p).at(i); }

}  // namespace

TEST(Residue, ReduceExamples) {
  const auto ctx = ResidueCtx::prime(R5(), above(R5(), 3));
  EXPECT_EQ(reduce_mod(ctx, make_element({0, 1})), make_element({2, 0}));
  EXPECT_EQ(reduce_mod(ctx, make_element({3, 0})), make_element({0, 0}));
  EXPECT_EQ(reduce_mod(ctx, make_element({1, 0})), make_element({1, 0}));
}

TEST(Residue, EnumerationExamples) {
  const auto P = above(R5(), 3);
  const auto res = enumerate_residues(ResidueCtx::prime(R5(), P));
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0], make_element({0, 0}));
  EXPECT_EQ(res[1], make_element({1, 0}));
  EXPECT_EQ(res[2], make_element({2, 0}));

  const auto sq = enumerate_residues(ResidueCtx(R5(), ideal_pow(R5(), P.hnf, 2)));
  ASSERT_EQ(sq.size(), 9u);
  for (long k = 0; k < 9; ++k) EXPECT_EQ(sq[k], make_element({k, 0}));

  EXPECT_EQ(enumerate_residues(ResidueCtx(R5(), principal_ideal(R5(), 2))).size(), 4u);
}

TEST(Residue, UnitExamples) {
  const auto ctx = ResidueCtx::prime(R5(), above(R5(), 3));
  EXPECT_TRUE(is_unit_mod(ctx, make_element({0, 1})));
  EXPECT_FALSE(is_unit_mod(ctx, make_element({1, 1})));
  EXPECT_FALSE(is_unit_mod(ctx, make_element({0, 0})));
}

TEST(Residue, FieldInverseExamples) {
  const auto ctx = ResidueCtx::prime(R5(), above(R5(), 3));
  EXPECT_EQ(field_inverse(ctx, make_element({2, 0})), make_element({2, 0}));
  EXPECT_EQ(field_inverse(ctx, make_element({1, 0})), make_element({1, 0}));
  const auto inert = ResidueCtx::prime(R5(), above(R5(), 11));
  const auto inv = field_inverse(inert, make_element({0, 1}));
  EXPECT_EQ(inv, reduce_mod(inert, make_element({0, -9})));
  EXPECT_EQ(inert.mul(inv, make_element({0, 1})), inert.one());

  try {
    field_inverse(ctx, make_element({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAUnit);
  }
  try {
    field_inverse(ResidueCtx(R5(), principal_ideal(R5(), 3)), make_element({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPrime);
  }
}

TEST(Residue, SquareClassExamples) {
  const auto ctx = ResidueCtx::prime(R5(), above(R5(), 3));
  EXPECT_EQ(square_class(ctx, make_element({-1, 0})), -1);
  EXPECT_EQ(square_class(ctx, make_element({3, 0})), 0);
  EXPECT_EQ(square_class(ResidueCtx::prime(R5(), above(R5(), 11)), make_element({-1, 0})), 1);
  try {
    square_class(ResidueCtx::prime(R5(), above(R5(), 2)), make_element({1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EvenCharacteristic);
  }
}

TEST(Residue, UnitIdealRejected) {
  EXPECT_THROW(ResidueCtx(R5(), unit_ideal(R5())), Error);
}

TEST(ResidueProperties, PartitionProperty) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> d(-200, 200);
  const auto I = hnf_from_generators(R5(), {make_element({7, 0}), make_element({2, 1})});
  const ResidueCtx ctx(R5(), ideal_mul(R5(), I, above(R5(), 3).hnf));
  const auto reps = enumerate_residues(ctx);
  ASSERT_EQ(reps.size(), ctx.norm().get_ui());
  std::set<RingElement> rep_set(reps.begin(), reps.end());
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      EXPECT_FALSE(ideal_contains(ctx.modulus(), R5().sub(reps[i], reps[j])));
  for (int it = 0; it < 200; ++it) {
    const auto a = make_element({d(rng), d(rng)});
    const auto r = reduce_mod(ctx, a);
    EXPECT_TRUE(rep_set.count(r));
    EXPECT_TRUE(ideal_contains(ctx.modulus(), R5().sub(a, r)));
  }
}

TEST(ResidueProperties, UnitCountAtPrimes) {
  for (const auto& R : {R5(), make_number_ring({1, 0, 1}), make_number_ring({-2, 0, 0, 1})}) {
    for (long p : {2, 3, 5, 7, 11}) {
      for (const auto& P : primes_above(R, p)) {
        if (P.norm() > 2000) continue;
        const auto ctx = ResidueCtx::prime(R, P);
        std::uint64_t units = 0;
        for (const auto& a : enumerate_residues(ctx)) {
          if (!is_unit_mod(ctx, a)) continue;
          ++units;
          EXPECT_EQ(ctx.mul(a, field_inverse(ctx, a)), ctx.one());
        }
        EXPECT_EQ(Integer(static_cast<unsigned long>(units)), P.norm() - 1) << P.label();
      }
    }
  }
}

TEST(ResidueProperties, CrtBijection) {
  std::vector<IdealHNF> small;
  for (long p : {2, 3, 7}) {
    for (const auto& P : primes_above(R5(), p)) {
      small.push_back(P.hnf);
      if (P.norm() <= 7) small.push_back(ideal_pow(R5(), P.hnf, 2));
    }
  }
  small.push_back(principal_ideal(R5(), 5));
  int pairs = 0;
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = 0; j < small.size(); ++j) {
      const auto& m = small[i];
      const auto& n = small[j];
      const Integer g = gcd(m.norm(), n.norm());
      if (g != 1 || m.norm() * n.norm() > 50 * 50) continue;
      const ResidueCtx cm(R5(), m), cn(R5(), n), cmn(R5(), ideal_mul(R5(), m, n));
      std::set<std::pair<std::uint64_t, std::uint64_t>> image;
      for (const auto& a : enumerate_residues(cmn)) image.emplace(cm.index_of(cm.reduce(a)), cn.index_of(cn.reduce(a)));
      EXPECT_EQ(image.size(), cm.size() * cn.size());
      EXPECT_EQ(cmn.size(), cm.size() * cn.size());
      ++pairs;
    }
  }
  EXPECT_GE(pairs, 10);
}

TEST(ResidueProperties, FastBackendAgreesWithExact) {
  std::mt19937_64 rng(32);
  std::vector<std::pair<NumberRing, IdealHNF>> cases;
  cases.emplace_back(R5(), principal_ideal(R5(), 6));
  cases.emplace_back(R5(), ideal_pow(R5(), primes_above(R5(), 3)[0].hnf, 3));
  cases.emplace_back(R5(), primes_above(R5(), 11)[0].hnf);
  const auto C = make_number_ring({-2, 0, 0, 1});
  cases.emplace_back(C, principal_ideal(C, 10));
  cases.emplace_back(C, ideal_pow(C, primes_above(C, 5)[0].hnf, 2));
  const auto Q = make_number_ring({0, 1});
  cases.emplace_back(Q, principal_ideal(Q, 360));
  for (const auto& [R, I] : cases) {
    const ResidueCtx ex(R, I);
    ASSERT_TRUE(FastResidue::fits(ex));
    const FastResidue fast(ex);
    std::uniform_int_distribution<std::uint64_t> d(0, ex.size() - 1);
    for (int it = 0; it < 300; ++it) {
      const auto i = d(rng), j = d(rng);
      const auto a = ex.at(i), b = ex.at(j);
      const auto fa = fast.at(i), fb = fast.at(j);
      EXPECT_EQ(fast.to_element(fa), a);
      EXPECT_EQ(fast.to_element(fast.mul(fa, fb)), ex.mul(a, b));
      EXPECT_EQ(fast.to_element(fast.add(fa, fb)), ex.add(a, b));
      EXPECT_EQ(fast.to_element(fast.sub(fa, fb)), ex.sub(a, b));
      EXPECT_EQ(fast.is_unit(fa), ex.is_unit(a));
      EXPECT_EQ(fast.index_of(fa), ex.index_of(a));
    }
  }
}

TEST(ResidueProperties, PartitionedIsDeterministic) {
  auto sum = [](unsigned w) {
    auto parts = detail::partitioned(1000, w, [](std::uint64_t b, std::uint64_t e) { return e * (e - 1) / 2 - b * (b - 1) / 2; });
    std::uint64_t s = 0;
    for (auto p : parts) s += p;
    return s;
  };
  EXPECT_EQ(sum(1), sum(4));
  EXPECT_EQ(sum(3), 999u * 1000u / 2u);
}
