// Verification sweeps behind the acceptance runner and `congnorm verify`.
// Each sweep compares a closed form or analytic test with an independent
// computation and records every case it looked at.
#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "congnorm/lattice.hpp"
#include "congnorm/normalizer.hpp"
#include "congnorm/oracle.hpp"

namespace congnorm {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool skipped = false;
  std::size_t checked = 0;
  std::vector<std::string> cases;
  std::vector<std::string> failures;
  std::string note;
  double seconds = 0;

  bool passed() const { return !skipped && failures.empty(); }

  void check(bool ok, const std::string& label, const std::string& detail = {}) {
    ++checked;
    cases.push_back(label);
    if (!ok) failures.push_back(detail.empty() ? label : label + ": " + detail);
  }
};

/// Upper limit applied on top of every sweep's own range.
struct VerifyLimits {
  Int max_level = 1 << 20;

  Int cap(Int wanted) const { return std::min(wanted, max_level); }
};

namespace detail {

inline std::string nh(Int n, const std::string& h) { return "N=" + std::to_string(n) + " " + h; }

inline std::string num(Int x) { return std::to_string(x); }

template <class F>
CriterionResult timed(int id, std::string title, F&& body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<IntMatrix2> gamma0_samples(Int n) {
  std::vector<IntMatrix2> out{IntMatrix2::identity(), IntMatrix2::T(), IntMatrix2{1, 0, BigInt(static_cast<long>(n)), 1},
                              IntMatrix2{1, 0, BigInt(static_cast<long>(-3 * n)), 1}};
  for (Int e : units_mod(n)) {
    const IntMatrix2 g = diagonal_lift(n, e);
    out.push_back(g);
    out.push_back(IntMatrix2::T() * g * IntMatrix2{1, 0, BigInt(static_cast<long>(n)), 1});
  }
  return out;
}

}  // namespace detail

inline CriterionResult verify_kernel_closed_form(const VerifyLimits& lim = {}) {
  return detail::timed(1, "kernel closed form equals definition-level sigma_H", [&](CriterionResult& r) {
    for (Int n = 1; n <= lim.cap(120); ++n) {
      for (Int d : divisors(n)) {
        const Int closed = sigma_kernel_closed_form(n, d);
        const Int def = sigma_h(subgroup_kernel(n, d));
        r.check(closed == def, detail::nh(n, "kernel:D=" + detail::num(d)),
                "closed " + detail::num(closed) + " vs " + detail::num(def));
      }
    }
  });
}

inline CriterionResult verify_gamma0_gamma1(const VerifyLimits& lim = {}) {
  return detail::timed(2, "sigma(Gamma_1(N)) = 1 and sigma(Gamma_0(N)) = gcd(s_N, 24)", [&](CriterionResult& r) {
    for (Int n = 1; n <= lim.cap(1000); ++n) {
      const Int want0 = std::gcd(square_part(n).s, Int{24});
      r.check(sigma_kernel_closed_form(n, n) == 1, detail::nh(n, "Gamma_1 closed form"));
      r.check(sigma_kernel_closed_form(n, 1) == want0, detail::nh(n, "Gamma_0 closed form"));
      if (n <= lim.cap(120)) {
        r.check(sigma_h(subgroup_kernel(n, n)) == 1, detail::nh(n, "Gamma_1 definition"));
        r.check(sigma_h(full_unit_group(n)) == want0, detail::nh(n, "Gamma_0 definition"));
      }
    }
  });
}

inline CriterionResult verify_torsion_closed_form(const VerifyLimits& lim = {}) {
  return detail::timed(3, "torsion closed form equals definition-level sigma_H", [&](CriterionResult& r) {
    std::vector<Int> levels;
    for (Int n = 1; n <= lim.cap(300); ++n) levels.push_back(n);
    for (Int n : {68, 1467}) {
      if (n <= lim.max_level && n > lim.cap(300)) levels.push_back(n);
    }
    for (Int n : levels) {
      for (Int m : divisors(carmichael_lambda(n))) {
        const Int closed = sigma_torsion_closed_form(n, m);
        const Int def = sigma_h(subgroup_torsion(n, m));
        r.check(closed == def, detail::nh(n, "torsion:m=" + detail::num(m)),
                "closed " + detail::num(closed) + " vs " + detail::num(def));
      }
    }
    r.note = "dyadic exponent uses min{theta, v2(s_N)}";
  });
}

inline CriterionResult verify_prime_powers(const VerifyLimits& lim = {}) {
  return detail::timed(4, "prime-power case dispatch equals sigma_H, normalizer is full", [&](CriterionResult& r) {
    const Int top = lim.cap(256);
    for (Int l = 2; l <= top; ++l) {
      if (!is_prime(l)) continue;
      Int q = l;
      for (int u = 1; q <= top; ++u, q *= l) {
        for (const auto& h : all_subgroups(q)) {
          const auto pp = sigma_primepower(l, u, h);
          const Int def = sigma_h(h);
          r.check(pp.sigma == def && normalizer_of(h).is_full_group, detail::nh(q, h.str()),
                  "case " + to_string(pp.which) + " gives " + detail::num(pp.sigma) + " vs " + detail::num(def));
        }
      }
    }
  });
}

inline CriterionResult verify_level_91(const VerifyLimits& lim = {}) {
  return detail::timed(5, "N=91, H=<80>: normalizer is a proper subset of Gamma_0^*(91)", [&](CriterionResult& r) {
    if (lim.max_level < 91) {
      r.skipped = true;
      r.note = "level cap below 91";
      return;
    }
    const ResidueSubgroup h = subgroup_generated(91, {80});
    r.check(!normalizes_element(atkin_lehner_type(91, 7, 1), h), "mu=7 Atkin-Lehner element rejected");
    bool all = true;
    for (const auto& g : detail::gamma0_samples(91)) all = all && normalizes_element(GammaStarElem::from_gamma0(91, g), h);
    r.check(all, "Gamma_0(91) samples accepted");
    const auto spec = normalizer_of(h);
    r.check(!spec.is_full_group && spec.failing_mu == std::vector<Int>{7, 13} && spec.index_over_gamma0() == 2,
            "normalizer_of reports mu in {1, 91} only");
  });
}

inline CriterionResult verify_oracle_agreement(const VerifyLimits& lim = {}) {
  return detail::timed(6, "residue test agrees with Schreier-conjugation oracle", [&](CriterionResult& r) {
    std::size_t elements = 0;
    for (Int n = 2; n <= lim.cap(12); ++n) {
      for (const auto& h : all_subgroups(n)) {
        const GroupOracle o(h);
        const Int sigma = sigma_h(h);
        std::size_t agree = 0;
        std::size_t total = 0;
        std::string first_bad;
        for (const auto& x : oracle_probe_set(n, sigma)) {
          ++total;
          if (o.normalizes(x) == normalizes_element(x, h)) {
            ++agree;
          } else if (first_bad.empty()) {
            first_bad = x.str();
          }
        }
        elements += total;
        r.check(agree == total, detail::nh(n, h.str()),
                detail::num(static_cast<Int>(total - agree)) + " disagreements, first " + first_bad);
      }
    }
    r.note = std::to_string(elements) + " elements compared";
  });
}

inline CriterionResult verify_pm_kernel(const VerifyLimits& lim = {}) {
  return detail::timed(7, "+- kernel closed form equals definition-level sigma_H", [&](CriterionResult& r) {
    for (Int n = 1; n <= lim.cap(120); ++n) {
      for (Int d : divisors(n)) {
        const Int closed = sigma_pm_kernel(n, d);
        const Int def = sigma_h(pm_extend(subgroup_kernel(n, d)));
        r.check(closed == def, detail::nh(n, "pm:kernel:D=" + detail::num(d)),
                "closed " + detail::num(closed) + " vs " + detail::num(def));
      }
    }
    if (lim.max_level >= 4) {
      r.check(sigma_pm_kernel(4, 4) == 2 && index_over_gamma0(4, 2) == 6 && index_over_gamma0(4, 1) == 2,
              "N=4: [Gamma_0^{*,2}(4) : Gamma_0^*(4)] = 6/2 = 3");
    }
  });
}

inline CriterionResult verify_index_formula(const VerifyLimits& lim = {}) {
  return detail::timed(8, "index formula via coset enumeration of the conjugated kernel", [&](CriterionResult& r) {
    for (Int n = 1; n <= lim.cap(24); ++n) {
      for (Int sigma : divisors(square_part(n).s)) {
        const Int small = n / (sigma * sigma);
        const Int big = coset_index(gamma00_image(n / sigma, sigma));
        const Int base = coset_index(gamma0_image(small));
        const Int factor = index_over_gamma0(n, sigma) / ipow(2, count_prime_divisors(small));
        bool ok = big % base == 0 && big / base == factor;
        // The scaling carries Gamma_0(N) onto Gamma_0^0(N/sigma, sigma).
        const GroupOracle target(gamma00_image(n / sigma, sigma));
        const GroupOracle source(gamma0_image(n));
        for (const auto& g : source.generators().gens) ok = ok && target.contains(scale_conjugate(sigma, g.as_matrix()));
        const Matrix2 back = diagonal_scaling(sigma).inverse();
        for (const auto& g : target.generators().gens) ok = ok && source.contains(back * g.as_matrix() * back.inverse());
        r.check(ok, "N=" + detail::num(n) + " sigma=" + detail::num(sigma),
                "cosets " + detail::num(big) + "/" + detail::num(base) + " vs " + detail::num(factor));
      }
    }
  });
}

inline CriterionResult verify_lattices(const VerifyLimits& lim = {}) {
  return detail::timed(9, "lattice SAut+, discriminant kernels and isometry invariants", [&](CriterionResult& r) {
    const Int top = lim.cap(60);
    for (Int n = 1; n <= top; ++n) {
      // Gamma_1(N) acts trivially on every L(N, D), so the kernel is read off
      // the diagonal lifts.
      const GroupOracle gamma1(gamma_h_image(subgroup_kernel(n, n)), top);
      for (Int d : divisors(n)) {
        const auto l = lattice_nd(n, d);
        const std::string tag = "L(" + detail::num(n) + "," + detail::num(d) + ")";
        const Int sigma = saut_plus_sigma(l);
        bool boundary = true;
        for (Int level : divisors(square_part(n).s)) {
          for (const auto& ed : exact_divisors(n)) {
            const auto x = atkin_lehner_type(n, ed.mu(), level);
            const bool inside = sigma % level == 0;
            boundary = boundary && acts_on_lattice(x, l) == inside && preserves_lattice(matrix_of(x), l) == inside;
          }
        }
        r.check(boundary, tag + " SAut+ boundary", "sigma " + detail::num(sigma));

        bool gamma1_trivial = true;
        for (const auto& g : gamma1.generators().gens) gamma1_trivial = gamma1_trivial && disc_action(g, l).is_identity();
        std::vector<Int> brute;
        for (Int e : units_mod(n)) {
          if (disc_action(diagonal_lift(n, e), l).is_identity()) brute.push_back(e);
        }
        const auto h = discriminant_kernel(l);
        r.check(gamma1_trivial && brute == h.elements(), tag + " discriminant kernel", h.str());
      }
      r.check(discriminant_kernel(lattice_nd(n, 1)) == full_unit_group(n), "L(" + detail::num(n) + ",1) kernel Gamma_0");
      r.check(discriminant_kernel(lattice_nd(n, n)) == subgroup_torsion(n, std::gcd(Int{2}, carmichael_lambda(n))),
              "L(" + detail::num(n) + "," + detail::num(n) + ") kernel Gamma_1^[2]");
    }
    std::map<std::tuple<Int, Int, std::vector<std::pair<Int, Int>>>, std::string> seen;
    bool injective = true;
    std::string clash;
    for (Int n = 1; n <= lim.cap(40); ++n) {
      for (Int d : divisors(n)) {
        const auto inv = iso_invariants(lattice_nd(n, d));
        const std::string tag = "L(" + detail::num(n) + "," + detail::num(d) + ")";
        const auto [it, fresh] = seen.emplace(std::make_tuple(inv.rescale_min, inv.disc_order, inv.subgroup_counts), tag);
        if (!fresh && injective) clash = tag + " vs " + it->second;
        injective = injective && fresh;
      }
    }
    r.check(injective, "iso invariants injective", clash);
  });
}

inline CriterionResult verify_families(const VerifyLimits& lim = {}) {
  return detail::timed(10, "conjugated families and the principal congruence lattice", [&](CriterionResult& r) {
    for (Int t = 1; t <= 8; ++t) {
      for (Int m = 1; m <= 8; ++m) {
        const Int n = t * m;
        if (n > lim.max_level) continue;
        for (Int d : divisors(n)) {
          const CongFamily fam{t, m, d};
          const auto fn = normalizer_of_family(fam);
          const Matrix2 c = fn.conjugator;
          std::vector<Matrix2> probe;
          bool ok = fn.base.sigma == fn.sigma && fn.index == euler_phi(d) * index_over_gamma0(n, fn.sigma);
          for (const auto& g : detail::gamma0_samples(n)) {
            if (mod_big(g.a - 1, d) != 0) continue;
            const Matrix2 img = c * g.as_matrix() * c.inverse();
            ok = ok && img.is_integral() && fam.contains(to_int_matrix(img));
            probe.push_back(img);
          }
          for (Int level : divisors(square_part(n).s)) {
            for (const auto& ed : exact_divisors(n)) {
              const Matrix2 x = fn.conjugate(atkin_lehner_type(n, ed.mu(), level));
              bool inside = true;
              for (const auto& g : probe) {
                const Matrix2 y = x * g * x.inverse();
                inside = inside && y.is_integral() && fam.contains(to_int_matrix(y));
              }
              const bool want = fn.sigma % level == 0;
              ok = ok && fn.contains(x) == want && inside == want;
            }
          }
          r.check(ok, "family T=" + detail::num(t) + " M=" + detail::num(m) + " D=" + detail::num(d));
        }
      }
    }
    std::vector<Int> not_diagonal;
    for (Int m = 1; m <= lim.cap(12); ++m) {
      const auto fam = conj_family_lattice(m, m, m);
      const std::string tag = "Gamma(" + detail::num(m) + ")";
      bool saut = saut_plus_sigma(fam) == m && preserves_lattice(IntMatrix2::S().as_matrix(), fam) &&
                  preserves_lattice(IntMatrix2::T().as_matrix(), fam);
      for (Int level : divisors(m)) {
        for (const auto& ed : exact_divisors(m * m)) {
          saut = saut && scale_conjugate(m, matrix_of(atkin_lehner_type(m * m, ed.mu(), level))).is_integral();
        }
      }
      r.check(saut, tag + " SAut+ = SL2(Z)");
      bool diagonal_kernel = true;
      for (Int a : units_mod(m)) {
        const Int dinv = inverse_mod(a, m * m);
        const BigInt b = (BigInt(static_cast<long>(a)) * dinv - 1) / m;
        const IntMatrix2 g{a, b, BigInt(static_cast<long>(m)), dinv};
        diagonal_kernel = diagonal_kernel && disc_action(g, fam).is_identity();
      }
      if (m > 1) {
        diagonal_kernel = diagonal_kernel && !disc_action(IntMatrix2::T(), fam).is_identity() &&
                          !disc_action(IntMatrix2::S(), fam).is_identity();
      }
      if (!diagonal_kernel) not_diagonal.push_back(m);
      r.check(diagonal_kernel, tag + " kernel is the diagonal-mod-M group",
              "some diagonal-mod-M matrix acts nontrivially; kernel is x^2 = 1 mod M");
    }
    if (!not_diagonal.empty()) {
      r.note = "diagonal-mod-M kernel fails for M in {";
      for (std::size_t i = 0; i < not_diagonal.size(); ++i) r.note += (i ? "," : "") + detail::num(not_diagonal[i]);
      r.note += "}";
    }
  });
}

enum class Suite { ClosedForms, Oracle, Lattice, All };

inline std::optional<Suite> parse_suite(const std::string& s) {
  if (s == "closed-forms") return Suite::ClosedForms;
  if (s == "oracle") return Suite::Oracle;
  if (s == "lattice") return Suite::Lattice;
  if (s == "all") return Suite::All;
  return std::nullopt;
}

inline std::vector<int> suite_criteria(Suite s) {
  switch (s) {
    case Suite::ClosedForms:
      return {1, 2, 3, 4, 5, 7};
    case Suite::Oracle:
      return {6, 8};
    case Suite::Lattice:
      return {9, 10};
    case Suite::All:
      break;
  }
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

inline CriterionResult run_criterion(int id, const VerifyLimits& lim = {}) {
  switch (id) {
    case 1: return verify_kernel_closed_form(lim);
    case 2: return verify_gamma0_gamma1(lim);
    case 3: return verify_torsion_closed_form(lim);
    case 4: return verify_prime_powers(lim);
    case 5: return verify_level_91(lim);
    case 6: return verify_oracle_agreement(lim);
    case 7: return verify_pm_kernel(lim);
    case 8: return verify_index_formula(lim);
    case 9: return verify_lattices(lim);
    case 10: return verify_families(lim);
    default: throw std::invalid_argument("no criterion " + std::to_string(id));
  }
}

}  // namespace congnorm
