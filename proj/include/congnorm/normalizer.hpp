// Normalizers in SL_2(R) of the groups Gamma_H: the per-element residue test,
// the full-group decision, and closed forms for the standard families.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "congnorm/gamma_star.hpp"
#include "congnorm/numtheory.hpp"
#include "congnorm/subgroups.hpp"

namespace congnorm {

/// The residue condition on u = a*d*mu, w = b*c*(N/mu): for all e in H with
/// inverse h, u*e - w*h and u*h - w*e lie in H and are mutually inverse.
inline bool residue_condition(const ResidueSubgroup& h, const BigInt& u, const BigInt& w) {
  const Int n = h.modulus();
  const Int ur = mod_big(u, n);
  const Int wr = mod_big(w, n);
  for (Int e : h.elements()) {
    const Int inv = inverse_mod(e, n);
    const Int x = mod(mulmod(ur, e, n) - mulmod(wr, inv, n), n);
    const Int y = mod(mulmod(ur, inv, n) - mulmod(wr, e, n), n);
    if (!h.contains(x) || !h.contains(y) || mulmod(x, y, n) != 1 % n) return false;
  }
  return true;
}

inline bool normalizes_element(const GammaStarElem& a, const ResidueSubgroup& h) {
  if (a.level() != h.modulus()) {
    throw LevelMismatch("element level " + std::to_string(a.level()) + " vs subgroup modulus " +
                        std::to_string(h.modulus()));
  }
  if (sigma_h(h) % sigma_level(a) != 0) return false;
  return residue_condition(h, a.adm(), a.bcn());
}

struct NormalizerSpec {
  Int level = 1;
  Int sigma = 1;
  bool is_full_group = true;
  ResidueSubgroup subgroup = full_unit_group(1);
  /// Exact divisors mu for which every realizable class passes.
  std::vector<Int> passing_mu;
  /// Exact divisors mu for which some realizable class fails.
  std::vector<Int> failing_mu;

  /// [normalizer : Gamma_0(N)] when it is known in closed form.
  std::optional<Int> index_over_gamma0() const {
    if (is_full_group) return congnorm::index_over_gamma0(level, sigma);
    // With sigma = 1 each mu contributes a single coset of Gamma_0(N).
    if (sigma == 1) return static_cast<Int>(passing_mu.size());
    return std::nullopt;
  }
};

/// Decides, for each exact divisor mu, whether every element of
/// Gamma_0^{*,sigma_H}(N) with that mu passes the residue condition. The
/// realizable values of a*d*mu are u = 0 mod alpha, u = 1 mod beta (see
/// atkin_lehner_type); each class mod N is tested through an explicit element.
inline NormalizerSpec normalizer_of(const ResidueSubgroup& h) {
  NormalizerSpec spec;
  spec.level = h.modulus();
  spec.sigma = sigma_h(h);
  spec.subgroup = h;
  const Int n = spec.level;
  for (const auto& ed : exact_divisors(n)) {
    const Int g1 = std::gcd(spec.sigma, square_part(ed.mu()).s);
    const Int g2 = std::gcd(spec.sigma, square_part(ed.complement()).s);
    const Int classes = g1 * g1 * g2 * g2;
    bool all_pass = true;
    for (Int k = 0; k < classes && all_pass; ++k) {
      const GammaStarElem x = atkin_lehner_type(n, ed.mu(), spec.sigma, k);
      all_pass = residue_condition(h, x.adm(), x.bcn());
    }
    (all_pass ? spec.passing_mu : spec.failing_mu).push_back(ed.mu());
  }
  spec.is_full_group = spec.failing_mu.empty();
  return spec;
}

namespace detail {
inline int two_adic(Int x) { return vp(2, x); }

inline Int exact_quotient(const Rational& q, const char* what) {
  if (q.get_den() != 1) throw std::logic_error(std::string(what) + " is not an integer: " + q.get_str());
  return static_cast<Int>(q.get_num().get_si());
}
}  // namespace detail

/// sigma for Gamma_{0,1}(N, D):
/// gcd(2D, N/D) * gcd(s_N,24) / (2^theta * gcd(s_N,24,2D)), theta = [2 v2(D) = v2(N) - 1].
inline Int sigma_kernel_closed_form(Int n, Int d) {
  require_positive(n, "N");
  if (d <= 0 || n % d != 0) throw std::invalid_argument("D=" + std::to_string(d) + " does not divide N=" + std::to_string(n));
  const Int s = square_part(n).s;
  const int theta = 2 * detail::two_adic(d) == detail::two_adic(n) - 1 ? 1 : 0;
  const Int g24 = std::gcd(s, Int{24});
  Rational r(BigInt(static_cast<long>(std::gcd(2 * d, n / d) * g24)),
             BigInt(static_cast<long>(ipow(2, theta) * std::gcd(g24, 2 * d))));
  r.canonicalize();
  return detail::exact_quotient(r, "kernel closed form");
}

/// The closed form for Gamma_1^{[m]}(N). The dyadic correction subtracts
/// min(theta, v2(s_N)); theta only counts when 2 | s_N.
inline Int sigma_torsion_closed_form(Int n, Int m) {
  const Int lam = carmichael_lambda(n);
  if (m <= 0 || lam % m != 0) throw std::invalid_argument("m=" + std::to_string(m) + " does not divide lambda(N)");
  const Int s = square_part(n).s;
  Rational sigma(1);
  for (Int p : prime_divisors(std::gcd(m, s))) {
    if (std::gcd(p - 1, m) > 2) continue;
    const int e = std::max(1, std::min(vp(p, m), vp(p, 2 * n) - vp(p, m)));
    sigma *= BigInt(static_cast<long>(ipow(p, e)));
  }
  const int v2m = detail::two_adic(m);
  const int v2n = detail::two_adic(n);
  const int theta = 2 * v2m == v2n + 1 ? 1 : 0;
  int eps = 0;
  if (v2m >= v2n && v2n >= 6) {
    eps = 2;
  } else if ((v2m == v2n - 1 && v2m >= 5) || (v2m == v2n && (v2n == 4 || v2n == 5))) {
    eps = 1;
  }
  const int shift = eps - std::min(theta, detail::two_adic(s));
  if (shift >= 0) {
    sigma *= BigInt(static_cast<long>(ipow(2, shift)));
  } else {
    sigma /= BigInt(static_cast<long>(ipow(2, -shift)));
  }
  sigma.canonicalize();
  return detail::exact_quotient(sigma, "torsion closed form");
}

/// The literal reading with max(theta, v2(s_N)) in the dyadic exponent; kept
/// so that its failures can be reported.
inline Rational sigma_torsion_literal_max(Int n, Int m) {
  const Int s = square_part(n).s;
  Rational sigma(1);
  for (Int p : prime_divisors(std::gcd(m, s))) {
    if (std::gcd(p - 1, m) > 2) continue;
    const int e = std::max(1, std::min(vp(p, m), vp(p, 2 * n) - vp(p, m)));
    sigma *= BigInt(static_cast<long>(ipow(p, e)));
  }
  const int v2m = detail::two_adic(m);
  const int v2n = detail::two_adic(n);
  const int theta = 2 * v2m == v2n + 1 ? 1 : 0;
  int eps = 0;
  if (v2m >= v2n && v2n >= 6) {
    eps = 2;
  } else if ((v2m == v2n - 1 && v2m >= 5) || (v2m == v2n && (v2n == 4 || v2n == 5))) {
    eps = 1;
  }
  const int shift = eps - std::max(theta, detail::two_adic(s));
  Rational f = shift >= 0 ? Rational(BigInt(static_cast<long>(ipow(2, shift))))
                          : Rational(BigInt(1), BigInt(static_cast<long>(ipow(2, -shift))));
  sigma *= f;
  sigma.canonicalize();
  return sigma;
}

struct TorsionLocalData {
  Int k_h = 1;      // N / gcd(m, s_N)
  int vp_k_h = 0;
  int vp_eta = 0;
};

/// K_H and v_p(eta_H) for H = (Z/N)^x[m] from the closed descriptions.
inline TorsionLocalData torsion_local_data(Int n, Int m, Int p) {
  if (!is_prime(p) || n % p != 0) throw std::invalid_argument("p must be a prime divisor of N");
  const Int lam = carmichael_lambda(n);
  if (m <= 0 || lam % m != 0) throw std::invalid_argument("m must divide lambda(N)");
  TorsionLocalData out;
  out.k_h = n / std::gcd(m, square_part(n).s);
  out.vp_k_h = vp(p, out.k_h);
  if (p == 2) {
    out.vp_eta = (n % 8 == 0 && m % 2 == 0) ? std::max(3, vp(2, n) - vp(2, m) + 1) : vp(2, n);
  } else if (std::gcd(p - 1, m) > 2) {
    out.vp_eta = 0;
  } else {
    out.vp_eta = std::max(1, vp(p, n) - vp(p, m));
  }
  return out;
}

/// Which clause of the prime-power classification applies.
enum class PrimePowerCase { Trivial, OddPrime, MinusOneInside, OneModFour, ThreeModFourWithoutMinusOne };

inline std::string to_string(PrimePowerCase c) {
  switch (c) {
    case PrimePowerCase::Trivial: return "trivial";
    case PrimePowerCase::OddPrime: return "odd";
    case PrimePowerCase::MinusOneInside: return "contains -1";
    case PrimePowerCase::OneModFour: return "inside 1 mod 4";
    case PrimePowerCase::ThreeModFourWithoutMinusOne: return "3 mod 4 without -1";
  }
  return "?";
}

struct PrimePowerSigma {
  Int sigma = 1;
  PrimePowerCase which = PrimePowerCase::Trivial;
  int w = 0;
};

inline int log2_exact(std::size_t x) {
  int k = 0;
  while ((std::size_t{1} << k) < x) ++k;
  if ((std::size_t{1} << k) != x) throw std::logic_error("expected a power of two");
  return k;
}

/// sigma for an arbitrary subgroup of (Z/l^u)^x by case dispatch.
inline PrimePowerSigma sigma_primepower(Int l, int u, const ResidueSubgroup& h) {
  if (!is_prime(l) || u < 0) throw std::invalid_argument("expected a prime l and u >= 0");
  if (h.modulus() != ipow(l, u)) throw std::invalid_argument("subgroup modulus is not l^u");
  PrimePowerSigma out;
  if (u <= 1 && l == 2) return out;
  if (u == 0) return out;
  const Int n = h.modulus();
  if (l != 2) {
    out.which = PrimePowerCase::OddPrime;
    Int m = static_cast<Int>(h.size());
    out.w = 0;
    while (m % l == 0) {
      m /= l;
      ++out.w;
    }
    out.sigma = m > 2 ? 1 : ipow(l, std::min(out.w, u - out.w));
    return out;
  }
  const int log_size = log2_exact(h.size());
  const bool all_one_mod_four =
      std::all_of(h.elements().begin(), h.elements().end(), [](Int x) { return x % 4 == 1; });
  if (all_one_mod_four) {
    out.which = PrimePowerCase::OneModFour;
    out.w = log_size;
    const int theta = 2 * out.w == u + 1 ? 1 : 0;
    out.sigma = ipow(2, std::min(out.w, u + 1 - out.w) - theta);
  } else if (h.contains(n - 1)) {
    out.which = PrimePowerCase::MinusOneInside;
    out.w = u == 2 ? 1 : log_size - 1;
    const int theta = 2 * out.w == u + 1 ? 1 : 0;
    out.sigma = ipow(2, std::min(out.w, u + 1 - out.w) - theta);
  } else {
    out.which = PrimePowerCase::ThreeModFourWithoutMinusOne;
    out.w = log_size - 1;
    out.sigma = ipow(2, std::min(out.w, u - out.w));
  }
  return out;
}

/// sigma for +-Gamma_{0,1}(N, D); (4, 4) gives Gamma_0(4).
inline Int sigma_pm_kernel(Int n, Int d) {
  if (n == 4 && d == 4) return sigma_kernel_closed_form(4, 1);
  return sigma_kernel_closed_form(n, d);
}

/// Integer matrices with T | c, M | b and diagonal = 1 mod D.
struct CongFamily {
  Int t = 1;
  Int m = 1;
  Int d = 1;

  Int level() const { return t * m; }

  void validate() const {
    if (t <= 0 || m <= 0 || d <= 0) throw std::invalid_argument("T, M, D must be positive");
    if (level() % d != 0) throw std::invalid_argument("D must divide M*T");
  }

  bool contains(const IntMatrix2& g) const {
    return g.det() == 1 && mod_big(g.c, t) == 0 && mod_big(g.b, m) == 0 && mod_big(g.a - 1, d) == 0 &&
           mod_big(g.d - 1, d) == 0;
  }
};

struct FamilyNormalizer {
  CongFamily family;
  Int sigma = 1;
  /// Conjugator diag(sqrt(M), 1/sqrt(M)); the normalizer is C * Gamma_0^{*,sigma}(MT) * C^{-1}.
  Matrix2 conjugator;
  NormalizerSpec base;
  /// Index of the family in its normalizer.
  Int index = 1;

  /// Maps an element of Gamma_0^{*,s_N}(N) into the family's ambient group.
  Matrix2 conjugate(const GammaStarElem& x) const { return conjugator * matrix_of(x) * conjugator.inverse(); }

  /// Membership of a real matrix in the normalizer.
  bool contains(const Matrix2& x) const {
    const Matrix2 back = conjugator.inverse() * x * conjugator;
    const auto elem = from_matrix(family.level(), back);
    return elem.has_value() && sigma % sigma_level(*elem) == 0;
  }
};

inline FamilyNormalizer normalizer_of_family(const CongFamily& f) {
  f.validate();
  FamilyNormalizer out;
  out.family = f;
  const Int n = f.level();
  out.sigma = sigma_kernel_closed_form(n, f.d);
  out.conjugator = diagonal_scaling(f.m);
  out.base = normalizer_of(subgroup_kernel(n, f.d));
  out.index = euler_phi(f.d) * index_over_gamma0(n, out.sigma);
  return out;
}

struct MixedSigma {
  Int upper = 1;  // Gamma_1^0(T, M)
  Int lower = 1;  // Gamma_0^1(T, M)
};

/// Closed forms for the two mixed cases of the (T, M) family.
inline MixedSigma sigma_mixed_cases(Int n, Int t, Int m) {
  if (t <= 0 || m <= 0 || t * m != n) throw std::invalid_argument("N must equal M*T");
  const Int g24 = std::gcd(square_part(n).s, Int{24});
  auto form = [&](Int x, Int y) {
    Rational r(BigInt(static_cast<long>(std::gcd(2 * x, y) * g24)), BigInt(static_cast<long>(std::gcd(g24, 2 * x))));
    if (vp(2, 2 * x) == vp(2, y)) r /= 2;
    r.canonicalize();
    return detail::exact_quotient(r, "mixed closed form");
  };
  return {form(t, m), form(m, t)};
}

/// Lower bound gcd(D, 2N/D) / 2^theta, theta = [2 v2(D) = v2(N) + 1], for
/// sigma_H of H = {x : x^2 = 1 mod D}.
inline Int squares_family_bound(Int n, Int d) {
  if (d <= 0 || n % d != 0) throw std::invalid_argument("D must divide N");
  const int theta = 2 * vp(2, d) == vp(2, n) + 1 ? 1 : 0;
  const Int g = std::gcd(d, 2 * n / d);
  if (g % ipow(2, theta) != 0) throw std::logic_error("squares bound is not an integer");
  return g / ipow(2, theta);
}

struct SquaresReport {
  Int n = 1;
  Int d = 1;
  Int sigma_h = 1;
  Int bound = 1;
  bool divisible = true;
  bool equal = true;
};

inline SquaresReport squares_family_report(Int n, Int d) {
  SquaresReport r{n, d, sigma_h(subgroup_squares_trivial(n, d)), squares_family_bound(n, d), true, true};
  r.divisible = r.sigma_h % r.bound == 0;
  r.equal = r.sigma_h == r.bound;
  return r;
}

}  // namespace congnorm
