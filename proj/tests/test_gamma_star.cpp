#include <gtest/gtest.h>

#include "congnorm/gamma_star.hpp"
#include "samples.hpp"

using namespace congnorm;
using congnorm::testing::random_element;
using congnorm::testing::random_gamma0;
using congnorm::testing::random_gamma1;

namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

SqrtRat root(Int n) { return SqrtRat::sqrt_of(n); }

GammaStarElem upper(Int level) { return {level, 1, 1, 1, 0, 1}; }

}  // namespace

TEST(ElemNew, Examples) {
  EXPECT_EQ(elem_new(4, 1, 1, 0, 0, 1), GammaStarElem::identity(4));
  EXPECT_EQ(matrix_of(elem_new(4, 4, 0, -1, 1, 0)), (Matrix2{0, SqrtRat(q(-1, 2)), 2, 0}));
  EXPECT_NO_THROW(elem_new(4, 1, 1, q(1, 2), q(1, 2), 2));
}

TEST(ElemNew, Errors) {
  EXPECT_THROW(elem_new(4, 2, 1, 0, 0, 1), NotExactDivisor);
  EXPECT_THROW(elem_new(4, 1, q(1, 3), 0, 0, 3), DenominatorTooLarge);
  EXPECT_THROW(elem_new(12, 3, q(1, 2), 0, 0, 2), DenominatorTooLarge);
  EXPECT_THROW(elem_new(4, 1, 1, 1, 1, 1), DeterminantNotOne);
  EXPECT_THROW(elem_new(12, 3, 1, 1, -1, 1), DeterminantNotOne);
}

TEST(MatrixOf, Examples) {
  EXPECT_EQ(matrix_of(GammaStarElem::identity(7)), Matrix2::identity());
  EXPECT_EQ(matrix_of(GammaStarElem::fricke(4)), (Matrix2{0, SqrtRat(q(-1, 2)), 2, 0}));
  const Matrix2 m = matrix_of(elem_new(12, 3, 1, 2, 1, 3));
  EXPECT_EQ(m, (Matrix2{root(3), SqrtRat(2) / root(3), SqrtRat(4) * root(3), SqrtRat(3) * root(3)}));
  EXPECT_EQ(m.det(), SqrtRat(1));
}

TEST(Multiply, Examples) {
  const auto x = elem_new(12, 3, 1, 2, 1, 3);
  EXPECT_EQ(x * inverse(x), GammaStarElem::identity(12));
  for (Int n : {1, 2, 4, 12, 45}) {
    EXPECT_EQ(GammaStarElem::fricke(n) * GammaStarElem::fricke(n), GammaStarElem(n, 1, -1, 0, 0, -1));
  }
  const auto tw = upper(4) * GammaStarElem::fricke(4);
  EXPECT_EQ(tw, elem_new(4, 4, 1, -1, 1, 0));
  EXPECT_EQ(matrix_of(tw), (Matrix2{2, SqrtRat(q(-1, 2)), 2, 0}));
  EXPECT_EQ(matrix_of(tw), matrix_of(upper(4)) * matrix_of(GammaStarElem::fricke(4)));
  EXPECT_THROW(upper(4) * upper(8), LevelMismatch);
}

TEST(Inverse, Examples) {
  EXPECT_EQ(inverse(GammaStarElem::identity(9)), GammaStarElem::identity(9));
  EXPECT_EQ(inverse(GammaStarElem(9, 1, 2, 1, 1, 5)), GammaStarElem(9, 1, 5, -1, -1, 2));
  EXPECT_EQ(inverse(GammaStarElem::fricke(4)), elem_new(4, 4, 0, 1, -1, 0));
  EXPECT_EQ(matrix_of(inverse(GammaStarElem::fricke(4))), matrix_of(GammaStarElem::fricke(4)).inverse());
}

TEST(NormalizePresentation, Examples) {
  const GammaStarElem g0(12, 1, 13, 1, 1, 1);
  EXPECT_EQ(normalize_presentation(g0), g0);
  // Only the mu=4 form of this element avoids cancellation.
  const auto x = elem_new(4, 1, 1, q(1, 2), q(1, 2), 2);
  const auto nx = normalize_presentation(x);
  EXPECT_EQ(nx, elem_new(4, 4, q(1, 2), 1, 1, 1));
  EXPECT_EQ(matrix_of(nx), matrix_of(x));
  EXPECT_FALSE(has_no_cancellation(x));
  EXPECT_TRUE(has_no_cancellation(nx));
  // The Fricke element also has a valid mu=1 form, but it cancels.
  const auto fr = GammaStarElem::fricke(4);
  EXPECT_EQ(presentations(fr).size(), 2U);
  EXPECT_EQ(normalize_presentation(fr), fr);
}

TEST(SigmaLevel, Examples) {
  EXPECT_EQ(sigma_level(GammaStarElem::from_gamma0(16, random_gamma0(16))), 1);
  for (Int n : {1, 4, 16, 72, 91}) EXPECT_EQ(sigma_level(GammaStarElem::fricke(n)), 1);
  EXPECT_EQ(sigma_level(elem_new(4, 1, 1, q(1, 2), q(1, 2), 2)), 2);
}

TEST(ConjugateInt, Examples) {
  const IntMatrix2 g{7, 3, 2, 1};
  EXPECT_EQ(conjugate_int(GammaStarElem::identity(5), g), g.as_matrix());
  for (Int n : {1, 2, 4, 6, 9, 12}) {
    EXPECT_EQ(conjugate_int(GammaStarElem::fricke(n), IntMatrix2::T()),
              (IntMatrix2{1, 0, BigInt(static_cast<long>(-n)), 1}.as_matrix()));
  }
  const auto x = elem_new(4, 1, 1, q(1, 2), q(1, 2), 2);
  const Matrix2 c = conjugate_int(x, IntMatrix2{5, 1, 4, 1});
  ASSERT_TRUE(c.is_integral());
  EXPECT_EQ(mod_big(to_int_matrix(c).c, 4), 0);
}

TEST(FromMatrix, Examples) {
  EXPECT_EQ(from_matrix(6, Matrix2::identity()), GammaStarElem::identity(6));
  EXPECT_EQ(from_matrix(4, Matrix2{0, SqrtRat(q(-1, 2)), 2, 0}), GammaStarElem::fricke(4));
  EXPECT_EQ(from_matrix(4, Matrix2{root(2), 0, 0, root(2).inverse()}), std::nullopt);
  EXPECT_THROW(from_matrix(4, Matrix2{2, 0, 0, 2}), DeterminantNotOne);
}

TEST(IntentCheck, Examples) {
  auto all = [](const std::array<bool, 9>& f) { return std::all_of(f.begin(), f.end(), [](bool b) { return b; }); };
  EXPECT_TRUE(all(intent_check(Matrix2::identity(), 4)));
  for (Int n : {2, 4, 6, 10, 12, 18}) EXPECT_TRUE(all(intent_check(matrix_of(GammaStarElem::fricke(n)), n)));
  const auto flags = intent_check(Matrix2{1, SqrtRat(q(1, 3)), 0, 1}, 4);
  EXPECT_FALSE(flags[3]);
  EXPECT_FALSE(all(flags));
}

TEST(IndexOverGamma0, Examples) {
  for (Int n = 1; n <= 200; ++n) EXPECT_EQ(index_over_gamma0(n, 1), ipow(2, count_prime_divisors(n)));
  EXPECT_EQ(index_over_gamma0(4, 2), 6);
  EXPECT_EQ(index_over_gamma0(16, 2), 8);
  EXPECT_THROW(index_over_gamma0(12, 3), std::invalid_argument);
  EXPECT_THROW(index_over_gamma0(16, 3), std::invalid_argument);
}

TEST(AtkinLehnerType, HasRequestedLevel) {
  for (Int n = 1; n <= 200; ++n) {
    for (Int sigma : divisors(square_part(n).s)) {
      for (const auto& ed : exact_divisors(n)) {
        for (Int shift = -2; shift <= 2; ++shift) {
          const auto x = atkin_lehner_type(n, ed.mu(), sigma, shift);
          ASSERT_EQ(sigma_level(x), sigma) << x.str();
          ASSERT_EQ(x.mu(), ed.mu());
        }
      }
    }
  }
}

class GroupLaw : public ::testing::TestWithParam<Int> {};

TEST_P(GroupLaw, AxiomsAndProductFormula) {
  const Int n = GetParam();
  const auto e = GammaStarElem::identity(n);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_element(n);
    const auto y = random_element(n);
    const auto z = random_element(n);
    ASSERT_EQ(matrix_of((x * y) * z), matrix_of(x * (y * z)));
    ASSERT_EQ(matrix_of(x * y), matrix_of(x) * matrix_of(y)) << x.str() << " " << y.str();
    ASSERT_EQ(matrix_of(x * inverse(x)), Matrix2::identity());
    ASSERT_EQ(matrix_of(inverse(x) * x), Matrix2::identity());
    ASSERT_EQ(matrix_of(x * e), matrix_of(x));
    ASSERT_EQ(matrix_of(e * x), matrix_of(x));
  }
}

TEST_P(GroupLaw, PresentationInvariants) {
  const Int n = GetParam();
  for (int i = 0; i < 300; ++i) {
    const auto x = random_element(n);
    const auto nx = normalize_presentation(x);
    ASSERT_EQ(matrix_of(nx), matrix_of(x));
    ASSERT_EQ(normalize_presentation(nx), nx);
    ASSERT_EQ(sigma_level(x), sigma_level_from_ac_bd(x));
    for (const auto& p : presentations(x)) {
      ASSERT_EQ(matrix_of(p), matrix_of(x));
      ASSERT_EQ(p.adm(), x.adm());
      ASSERT_EQ(p.bcn(), x.bcn());
      ASSERT_EQ(p.a() * p.b(), x.a() * x.b());
      ASSERT_EQ(p.a() * p.c(), x.a() * x.c());
      ASSERT_EQ(p.b() * p.d(), x.b() * x.d());
      ASSERT_EQ(p.c() * p.d(), x.c() * x.d());
      ASSERT_EQ(sigma_level(p), sigma_level(x));
    }
    ASSERT_EQ(from_matrix(n, matrix_of(x)), nx);
  }
}

TEST_P(GroupLaw, ConjugationFormula) {
  const Int n = GetParam();
  for (int i = 0; i < 300; ++i) {
    const auto x = random_element(n);
    const Matrix2 ax = matrix_of(x);
    const IntMatrix2 any = random_gamma0(1, 5);
    ASSERT_EQ(conjugate_int(x, any), ax * any.as_matrix() * ax.inverse());
    const IntMatrix2 g1 = random_gamma1(n);
    const Matrix2 c = conjugate_int(x, g1);
    ASSERT_TRUE(c.is_integral()) << x.str() << " " << g1.str();
    ASSERT_EQ(mod_big(to_int_matrix(c).c, n), 0);
  }
}

INSTANTIATE_TEST_SUITE_P(LevelsUpTo48, GroupLaw, ::testing::Range<Int>(1, 49));

TEST(Squarefree, AllEntriesIntegral) {
  for (Int n = 1; n <= 200; ++n) {
    if (!is_squarefree(n)) continue;
    for (int i = 0; i < 20; ++i) {
      const auto x = random_element(n);
      ASSERT_TRUE(is_integer(x.a()) && is_integer(x.b()) && is_integer(x.c()) && is_integer(x.d()));
    }
  }
}
