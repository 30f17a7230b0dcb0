#include <gtest/gtest.h>

#include "congnorm/subgroups.hpp"
#include "samples.hpp"

using namespace congnorm;

namespace {

std::vector<Int> v(std::initializer_list<Int> xs) { return xs; }

// Independent references.
std::vector<Int> naive_units(Int n) {
  std::vector<Int> out;
  for (Int x = 0; x < n; ++x) {
    if (std::gcd(x, n) == 1) out.push_back(x);
  }
  return out;
}

Int naive_inverse(Int x, Int n) {
  for (Int y = 0; y < n; ++y) {
    if ((x * y) % n == 1 % n) return y;
  }
  throw std::logic_error("no inverse");
}

std::vector<Int> naive_cyclic(Int n, Int g) {
  std::set<Int> s;
  Int y = 1 % n;
  do {
    s.insert(y);
    y = y * g % n;
  } while (y != 1 % n);
  return {s.begin(), s.end()};
}

bool kernel_inside(const ResidueSubgroup& h, Int k) {
  const Int n = h.modulus();
  for (Int x : naive_units(n)) {
    if (x % k == 1 % k && !h.contains(x)) return false;
  }
  return true;
}

}  // namespace

TEST(Kernel, Examples) {
  for (Int n : {1, 5, 12, 24, 91}) {
    EXPECT_EQ(subgroup_kernel(n, 1).elements(), naive_units(n));
    EXPECT_EQ(subgroup_kernel(n, n).elements(), v({1 % n}));
  }
  EXPECT_EQ(subgroup_kernel(12, 4).elements(), v({1, 5}));
  EXPECT_THROW(subgroup_kernel(12, 5), std::invalid_argument);
}

TEST(Torsion, Examples) {
  for (Int n : {1, 7, 8, 16, 68, 91}) {
    EXPECT_EQ(subgroup_torsion(n, 1).elements(), v({1 % n}));
    EXPECT_EQ(subgroup_torsion(n, carmichael_lambda(n)).elements(), naive_units(n));
  }
  EXPECT_EQ(subgroup_torsion(8, 2).elements(), v({1, 3, 5, 7}));
  EXPECT_THROW(subgroup_torsion(8, 4), std::invalid_argument);
}

TEST(Generated, Examples) {
  EXPECT_EQ(subgroup_generated(91, {}).elements(), v({1}));
  const auto h = subgroup_generated(91, {80});
  EXPECT_EQ(h.size(), 12U);
  EXPECT_EQ(h.elements(), naive_cyclic(91, 80));
  EXPECT_EQ(pm_extend(subgroup_generated(4, {})).elements(), v({1, 3}));
  EXPECT_THROW(subgroup_generated(91, {7}), std::invalid_argument);
}

TEST(Validation, RejectsNonSubgroups) {
  EXPECT_THROW(ResidueSubgroup(8, {1, 3, 5}), std::invalid_argument);
  EXPECT_THROW(ResidueSubgroup(8, {3}), std::invalid_argument);
  EXPECT_THROW(ResidueSubgroup(8, {1, 2}), std::invalid_argument);
  EXPECT_NO_THROW(ResidueSubgroup(8, {1, 3}));
}

TEST(AllSubgroups, KnownCounts) {
  EXPECT_EQ(all_subgroups(8).size(), 5U);    // C2 x C2
  EXPECT_EQ(all_subgroups(7).size(), 4U);    // C6
  EXPECT_EQ(all_subgroups(16).size(), 8U);   // C2 x C4
  EXPECT_EQ(all_subgroups(15).size(), 8U);   // C2 x C4
  EXPECT_EQ(all_subgroups(24).size(), 16U);  // C2 x C2 x C2
  EXPECT_EQ(all_subgroups(1).size(), 1U);
  for (Int n = 1; n <= 40; ++n) {
    for (const auto& h : all_subgroups(n)) {
      ASSERT_NO_THROW(ResidueSubgroup(n, h.elements())) << h.str();
      ASSERT_EQ(static_cast<Int>(euler_phi(n)) % static_cast<Int>(h.size()), 0);
    }
  }
}

TEST(Invariants, KH) {
  for (Int n = 1; n <= 200; ++n) {
    const auto [s, t] = square_part(n);
    EXPECT_EQ(k_h(full_unit_group(n)), s * t);
    EXPECT_EQ(k_h(subgroup_generated(n, {})), n);
  }
  const auto h = subgroup_kernel(24, 8);
  EXPECT_EQ(k_h(h), kernel_inside(h, 12) ? 12 : 24);
}

TEST(Invariants, Eta) {
  for (Int n = 1; n <= 200; ++n) EXPECT_EQ(eta_h(subgroup_generated(n, {})), n);
  EXPECT_EQ(eta_h(full_unit_group(24)), 24);
  const auto h = subgroup_generated(91, {80});
  Int g = 91;
  for (Int e : h.elements()) g = std::gcd(g, std::abs(e - naive_inverse(e, 91)));
  EXPECT_EQ(eta_h(h), g);
}

TEST(Invariants, EtaWithRandomLifts) {
  using congnorm::testing::uniform;
  for (Int n = 2; n <= 60; ++n) {
    for (const auto& h : all_subgroups(n)) {
      Int g = 0;
      for (Int e : h.elements()) {
        const Int inv = naive_inverse(e, n);
        for (int k = 0; k < 4; ++k) g = std::gcd(g, std::abs((e + uniform(-5, 5) * n) - (inv + uniform(-5, 5) * n)));
      }
      ASSERT_EQ(std::gcd(g, n), eta_h(h)) << h.str();
      // N itself is a difference of lifts of (1, 1).
      ASSERT_EQ(n % eta_h(h), 0);
    }
  }
}

TEST(Invariants, Sigma) {
  for (Int n = 1; n <= 200; ++n) {
    EXPECT_EQ(sigma_h(subgroup_generated(n, {})), 1) << n;
    EXPECT_EQ(sigma_h(full_unit_group(n)), std::gcd(square_part(n).s, Int{24})) << n;
  }
}

TEST(Invariants, DivisibilityUpTo120) {
  for (Int n = 1; n <= 120; ++n) {
    std::vector<ResidueSubgroup> hs;
    for (Int d : divisors(n)) hs.push_back(subgroup_kernel(n, d));
    for (Int m : divisors(carmichael_lambda(n))) hs.push_back(subgroup_torsion(n, m));
    for (Int g : naive_units(n)) hs.push_back(subgroup_generated(n, {g}));
    for (const auto& h : hs) {
      ASSERT_NO_THROW(ResidueSubgroup(n, h.elements()));
      ASSERT_EQ(n % eta_h(h), 0);
      ASSERT_EQ(square_part(n).s % sigma_h(h), 0) << h.str();
      ASSERT_EQ(sigma_h(h), std::gcd(n / k_h(h), eta_h(h)));
      ASSERT_TRUE(kernel_inside(h, k_h(h)));
    }
  }
}

TEST(Invariants, KHMonotone) {
  for (Int n = 1; n <= 48; ++n) {
    const auto subs = all_subgroups(n);
    for (const auto& a : subs) {
      for (const auto& b : subs) {
        if (a.is_subset_of(b)) {
          ASSERT_GE(k_h(a), k_h(b)) << a.str() << " " << b.str();
        }
      }
    }
  }
}

TEST(AtkinLehner, Examples) {
  for (Int n : {12, 91, 60}) {
    for (Int t : naive_units(n)) {
      EXPECT_EQ(al_action(n, 1, t), t);
      EXPECT_EQ(al_action(n, n, t), naive_inverse(t, n));
    }
  }
  EXPECT_EQ(al_action(91, 7, 80), 54);
  EXPECT_EQ(54 % 7, 5);
  EXPECT_EQ(54 % 13, 2);
  EXPECT_THROW(al_action(91, 7, 14), std::invalid_argument);
  EXPECT_THROW(al_action(12, 2, 5), std::invalid_argument);
}

TEST(AtkinLehner, IsAnActionOfExactDivisors) {
  for (Int n = 1; n <= 60; ++n) {
    const auto eds = exact_divisors(n);
    for (const auto& x : eds) {
      for (const auto& y : eds) {
        const Int xy = exact_divisor_product(x, y).mu();
        for (Int t : naive_units(n)) {
          ASSERT_EQ(al_action(n, x.mu(), al_action(n, y.mu(), t)), al_action(n, xy, t));
        }
      }
    }
  }
}

TEST(AtkinLehner, InvariantFamilies) {
  EXPECT_FALSE(is_al_invariant(subgroup_generated(91, {80})));
  for (Int n = 1; n <= 60; ++n) {
    std::vector<ResidueSubgroup> base;
    for (Int m : divisors(carmichael_lambda(n))) base.push_back(subgroup_torsion(n, m));
    for (Int d : divisors(n)) base.push_back(subgroup_kernel(n, d));
    const auto two_torsion = subgroup_torsion(n, std::gcd(Int{2}, carmichael_lambda(n)));
    for (const auto& h : all_subgroups(n)) {
      if (h.is_subset_of(two_torsion)) base.push_back(h);
    }
    for (const auto& h : base) ASSERT_TRUE(is_al_invariant(h)) << h.str();
    for (const auto& a : base) {
      for (const auto& b : base) {
        ASSERT_TRUE(is_al_invariant(subgroup_generated(n, [&] {
          auto gens = a.elements();
          gens.insert(gens.end(), b.elements().begin(), b.elements().end());
          return gens;
        }())));
      }
    }
  }
}

TEST(GammaH, MembershipAndLifts) {
  for (Int n = 1; n <= 40; ++n) {
    const auto h = subgroup_kernel(n, n);
    for (Int e : naive_units(n)) {
      const IntMatrix2 lift = diagonal_lift(n, e);
      ASSERT_EQ(lift.det(), 1);
      ASSERT_EQ(mod_big(lift.c, n), 0);
      ASSERT_EQ(in_gamma_h(lift, full_unit_group(n)), true);
      ASSERT_EQ(in_gamma_h(lift, h), e == 1 % n);
    }
  }
  EXPECT_FALSE(in_gamma_h(IntMatrix2::S(), full_unit_group(2)));
  EXPECT_TRUE(in_gamma_h(IntMatrix2::S(), full_unit_group(1)));
}
