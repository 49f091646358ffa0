#include <gtest/gtest.h>

#include "exunit/counting.hpp"

using namespace exunit;

namespace {

const NumberRing& R5() {
  static const NumberRing r = make_number_ring({5, 0, 1});
  return r;
}
const NumberRing& RQ() {
  static const NumberRing r = make_number_ring({0, 1});
  return r;
}

VarietySpec circle(const NumberRing& R, long c = 1) {
  return parse_variety(R, 2, 1, {"x1^2 + x2^2 - " + std::to_string(c)});
}
MultiPoly F(const NumberRing& R, const std::string& s) { return parse_poly(s, R, 1); }
PrimeFactor above(const NumberRing& R, long p, std::size_t i = 0) { return primes_above(R, p).at(i); }
PrimeFactor with_exponent(PrimeFactor P, unsigned e) {
  P.exponent = e;
  return P;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidConfig;
}

}  // namespace

TEST(BruteForce, Examples) {
  const auto V = circle(R5());
  const auto f = F(R5(), "x1 - 2");
  EXPECT_EQ(brute_force_count(R5(), V, f, above(R5(), 3).hnf), 2);
  EXPECT_EQ(brute_force_count(R5(), V, f, principal_ideal(R5(), 3)), 4);
  EXPECT_EQ(brute_force_count(RQ(), make_variety(1, 0, {}), F(RQ(), "x1^2 - x1"), principal_ideal(RQ(), 5)), 3);
}

TEST(BruteForce, Errors) {
  EnumOptions tight;
  tight.cap = 80;
  EXPECT_EQ(code_of([&] { brute_force_count(R5(), circle(R5()), F(R5(), "x1"), principal_ideal(R5(), 3), tight); }),
            Errc::CapExceeded);
  EXPECT_EQ(code_of([&] { brute_force_count(R5(), circle(R5()), F(R5(), "7"), principal_ideal(R5(), 3)); }),
            Errc::ConstantPolynomial);
  EXPECT_EQ(code_of([&] { theorem1_count(R5(), circle(R5()), F(R5(), "x1"), unit_ideal(R5())); }), Errc::UnitIdeal);
}

TEST(BruteForce, BackendsAndWorkersAgree) {
  const auto V = parse_variety(R5(), 2, 1, {"x1*x2 - t"});
  const auto f = F(R5(), "x1^2 + 1");
  for (const auto& n : {principal_ideal(R5(), 6), ideal_pow(R5(), above(R5(), 3).hnf, 3), principal_ideal(R5(), 7)}) {
    EnumOptions ex, fa, par;
    ex.backend = BackendChoice::Exact;
    fa.backend = BackendChoice::Fast;
    par.workers = 4;
    const Integer a = brute_force_count(R5(), V, f, n, ex);
    EXPECT_EQ(a, brute_force_count(R5(), V, f, n, fa));
    EXPECT_EQ(a, brute_force_count(R5(), V, f, n, par));
  }
}

TEST(LocalCounts, Examples) {
  const auto V = circle(R5());
  auto ld = local_counts(R5(), V, F(R5(), "x1 - 2"), above(R5(), 3));
  EXPECT_EQ(ld.count_X, 4);
  EXPECT_EQ(ld.count_N, 2);
  EXPECT_EQ(ld.factor, Rational(2, 3));

  ld = local_counts(R5(), V, F(R5(), "x1"), above(R5(), 11));
  EXPECT_EQ(ld.count_X, 120);
  EXPECT_EQ(ld.count_N, 4);
  EXPECT_EQ(ld.factor, Rational(116, 121));

  ld = local_counts(R5(), V, F(R5(), "x1"), above(R5(), 5));
  EXPECT_EQ(ld.count_X, 4);
  EXPECT_EQ(ld.count_N, 4);
  EXPECT_EQ(ld.factor, 0);
}

TEST(PrimePower, Examples) {
  const auto V = circle(R5());
  const auto f = F(R5(), "x1 - 2");
  EXPECT_EQ(prime_power_count(R5(), V, f, above(R5(), 3), 1), 2);
  EXPECT_EQ(prime_power_count(R5(), V, f, above(R5(), 3), 2), 6);
  EXPECT_EQ(prime_power_count(R5(), V, F(R5(), "x1"), above(R5(), 5), 3), 0);
  EXPECT_THROW(prime_power_count(R5(), V, f, above(R5(), 2), 1), BadReductionError);
}

TEST(ProductFormula, Examples) {
  const auto V = circle(R5());
  const auto f = F(R5(), "x1 - 2");
  EXPECT_EQ(theorem1_count(R5(), V, f, principal_ideal(R5(), 3)).total, 4);
  EXPECT_EQ(theorem1_count(R5(), V, f, ideal_pow(R5(), above(R5(), 3).hnf, 2)).total, 6);
  const auto big = theorem1_count(R5(), V, f, std::vector<PrimeFactor>{with_exponent(above(R5(), 3), 100)});
  EXPECT_EQ(big.total, 2 * ipow(3, 99));
  EXPECT_EQ(big.total.get_str().size(), 48u);
}

TEST(ProductFormula, BadReductionCarriesWitness) {
  try {
    theorem1_count(R5(), circle(R5()), F(R5(), "x1 - 2"), principal_ideal(R5(), 6));
    FAIL();
  } catch (const BadReductionError& e) {
    EXPECT_EQ(e.code(), Errc::BadReduction);
    EXPECT_EQ(e.prime().label(), "P2[x+1]");
    EXPECT_EQ(e.witness()[0], make_element({1, 0}));
    EXPECT_EQ(e.witness()[1], make_element({0, 0}));
  }
}

TEST(ProductFormula, EmptyFibreGivesZero) {
  const auto V = parse_variety(RQ(), 1, 1, {"x1^2 + 1"});
  const auto rep = theorem1_count(RQ(), V, F(RQ(), "x1"), principal_ideal(RQ(), 3));
  EXPECT_EQ(rep.total, 0);
  EXPECT_EQ(brute_force_count(RQ(), V, F(RQ(), "x1"), principal_ideal(RQ(), 3)), 0);
}

TEST(Census, Examples) {
  EXPECT_EQ(lifting_census(R5(), circle(R5()), above(R5(), 3), 1), (Histogram{{3, 4}}));
  EXPECT_EQ(lifting_census(R5(), make_variety(1, 0, {}), above(R5(), 3), 1), (Histogram{{3, 3}}));
  EXPECT_EQ(lifting_census(RQ(), parse_variety(RQ(), 1, 1, {"x1^2 - 1"}), above(RQ(), 5), 1), (Histogram{{1, 2}}));
  EXPECT_THROW(lifting_census(R5(), circle(R5()), above(R5(), 2), 1), BadReductionError);
}

TEST(Census, SingleBinUnderGoodReduction) {
  for (long c : {1L, 2L, 3L}) {
    const auto V = circle(R5(), c);
    for (long p : {3L, 7L}) {
      for (const auto& P : primes_above(R5(), p)) {
        if (!check_good_reduction(R5(), V, P).ok) continue;
        for (unsigned k = 1; k <= 2; ++k) {
          const auto h = lifting_census(R5(), V, P, k);
          ASSERT_LE(h.size(), 1u);
          if (!h.empty()) {
            EXPECT_EQ(Integer(static_cast<unsigned long>(h.begin()->first)), P.norm());
          }
        }
      }
    }
  }
}

TEST(Example25, Examples) {
  EXPECT_EQ(example25_count(R5(), 2, 1, principal_ideal(R5(), 3), Example25Mode::Corrected).total, 4);
  EXPECT_EQ(example25_count(R5(), 2, 1, principal_ideal(R5(), 3), Example25Mode::StrictPaper).total, 9);
  EXPECT_EQ(example25_count(R5(), 0, 1, principal_ideal(R5(), 11), Example25Mode::Corrected).total, 116);
  EXPECT_EQ(example25_count(R5(), 0, 1, principal_ideal(R5(), 11), Example25Mode::StrictPaper).total, 116);
  EXPECT_EQ(code_of([] { example25_count(RQ(), 0, 1, principal_ideal(RQ(), 3), Example25Mode::Corrected); }),
            Errc::NotQSqrtMinus5);
  EXPECT_EQ(code_of([] { example25_count(R5(), 0, 3, principal_ideal(R5(), 3), Example25Mode::Corrected); }),
            Errc::BadModulus);
  EXPECT_EQ(code_of([] { example25_count(R5(), 0, 1, principal_ideal(R5(), 2), Example25Mode::Corrected); }),
            Errc::BadModulus);
}

TEST(Example25, CorrectedModeMatchesDirectCount) {
  std::vector<IdealHNF> moduli;
  for (long p : {3L, 7L, 11L, 13L, 23L}) {
    moduli.push_back(principal_ideal(R5(), p));
    for (const auto& P : primes_above(R5(), p)) {
      moduli.push_back(P.hnf);
      if (P.norm() <= 23) moduli.push_back(ideal_pow(R5(), P.hnf, 2));
    }
  }
  moduli.push_back(above(R5(), 5).hnf);
  for (long a = 0; a < 4; ++a) {
    for (long c : {1L, 2L, 3L, 4L}) {
      MultiPoly circ = parse_poly("x1^2 + x2^2", R5(), 2);
      circ.add_term({0, 0}, R5().from_integer(-c));
      const auto V = make_variety(2, 1, {circ});
      MultiPoly f = F(R5(), "x1");
      f.add_term({0}, R5().from_integer(-a));
      for (const auto& n : moduli) {
        if (gcd(n.norm(), Integer(2 * c)) != 1) continue;
        if (n.norm() * n.norm() > 300000) continue;
        const Integer closed = example25_count(R5(), a, c, n, Example25Mode::Corrected).total;
        EXPECT_EQ(closed, brute_force_count(R5(), V, f, n)) << "a=" << a << " c=" << c << " N=" << n.norm();
      }
    }
  }
}

TEST(LangWeil, Examples) {
  const auto line = parse_variety(RQ(), 2, 1, {"x1 + x2"});
  const auto circ = circle(RQ());
  for (long p : {3L, 5L, 7L, 13L}) EXPECT_EQ(langweil_deviation(RQ(), line, above(RQ(), p)).deviation, 0);
  const auto r13 = langweil_deviation(RQ(), circ, above(RQ(), 13));
  EXPECT_EQ(r13.count_X, 12);
  EXPECT_EQ(r13.deviation, 1);
  const auto r7 = langweil_deviation(RQ(), circ, above(RQ(), 7));
  EXPECT_EQ(r7.count_X, 8);
  EXPECT_EQ(r7.deviation, 1);
  EXPECT_DOUBLE_EQ(r7.bound, 6.0);
}

TEST(Asympt, Examples) {
  const auto V = circle(R5());
  const auto f = F(R5(), "x1 - 2");
  auto s = asympt_series(R5(), V, f, std::vector<IdealHNF>{principal_ideal(R5(), 3)});
  ASSERT_EQ(s.records.size(), 1u);
  const auto& r = s.records[0];
  EXPECT_EQ(r.N, 9);
  EXPECT_EQ(r.count, 4);
  EXPECT_EQ(r.ratio, Rational(4, 9));
  EXPECT_EQ(r.omega, 2u);
  EXPECT_NEAR(r.sum_inv_sqrt, 1.1547005, 1e-6);
  EXPECT_NEAR(r.sum_inv, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.max_local_dev, 1.0 / 3.0, 1e-12);

  s = asympt_series(R5(), V, f, std::vector<IdealHNF>{above(R5(), 3).hnf});
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_EQ(s.records[0].N, 3);
  EXPECT_EQ(s.records[0].count, 2);
  EXPECT_EQ(s.records[0].ratio, Rational(2, 3));
  EXPECT_EQ(s.records[0].omega, 1u);

  EXPECT_TRUE(asympt_series(R5(), V, f, std::vector<IdealHNF>{}).records.empty());

  s = asympt_series(R5(), V, f, std::vector<IdealHNF>{principal_ideal(R5(), 2), principal_ideal(R5(), 3)});
  EXPECT_EQ(s.records.size(), 1u);
  EXPECT_EQ(s.notices.size(), 1u);
}

TEST(Asympt, FamilyGeneration) {
  const auto V = circle(R5());
  const auto f0 = asympt_family(R5(), V, 10, 0);
  ASSERT_EQ(f0.members.size(), 5u);
  EXPECT_EQ(describe_factors(f0.members[0]), "P3[x+1]");
  EXPECT_EQ(f0.notices.size(), 1u);
  const auto f1 = asympt_family(R5(), V, 10, 1);
  EXPECT_EQ(f1.members.size(), 7u);
  const auto f2 = asympt_family(R5(), V, 10, 2);
  EXPECT_EQ(f2.members.size(), 8u);
  EXPECT_TRUE(asympt_family(R5(), V, 2, 2).members.empty());
}

TEST(CountingProperties, PrimePowerRecursion) {
  const std::vector<std::pair<std::string, std::size_t>> varieties{{"x1^2 + x2^2 - 1", 2}, {"x1 + x2 - 3", 2}};
  for (const auto& [eq, amb] : varieties) {
    const auto V = parse_variety(R5(), amb, 1, {eq});
    for (const auto& f : {F(R5(), "x1 - 2"), F(R5(), "x1^2 - x1")}) {
      for (long p : {3L, 5L, 7L}) {
        for (const auto& P : primes_above(R5(), p)) {
          if (!check_good_reduction(R5(), V, P).ok) continue;
          const Integer c1 = brute_force_count(R5(), V, f, P.hnf);
          for (unsigned e = 1; e <= 3; ++e) {
            const auto n = ideal_pow(R5(), P.hnf, e);
            if (ipow(n.norm(), amb) > 2'000'000) continue;
            const Integer expect = ipow(P.norm(), (amb - 1) * (e - 1)) * c1;
            EXPECT_EQ(brute_force_count(R5(), V, f, n), expect);
            EXPECT_EQ(prime_power_count(R5(), V, f, P, e), expect);
          }
        }
      }
    }
  }
}

TEST(CountingProperties, IntegralityAndBounds) {
  const auto V = circle(R5(), 3);
  const auto f = F(R5(), "x1^2 - x1");
  for (long p : {7L, 11L, 13L, 17L, 19L, 23L, 29L}) {
    for (const auto& P : primes_above(R5(), p)) {
      if (ipow(P.norm(), 2) > 200000) continue;
      for (unsigned e : {1u, 5u, 40u}) {
        const auto rep = theorem1_count(R5(), V, f, std::vector<PrimeFactor>{with_exponent(P, e)});
        EXPECT_GE(rep.total, 0);
        EXPECT_LE(rep.total, ipow(rep.modulus_norm, 2));
        for (const auto& ld : rep.locals) {
          EXPECT_LE(ld.count_N, ld.count_X);
          EXPECT_GE(ld.factor, 0);
          EXPECT_LE(ld.factor, Rational(P.norm()));
        }
      }
    }
  }
}
