// Subgroups H of (Z/NZ)^x, the groups Gamma_H between Gamma_1(N) and
// Gamma_0(N), and the invariants K_H, eta_H, sigma_H.
//
// Residues are stored as integers in [0, N); for N = 1 the unit group is the
// single class {0}.
#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "congnorm/numtheory.hpp"
#include "congnorm/sqrt_rational.hpp"

namespace congnorm {

class ResidueSubgroup {
 public:
  /// Validates that `elements` is a subgroup of (Z/NZ)^x.
  ResidueSubgroup(Int modulus, std::vector<Int> elements) : n_(modulus), mask_(static_cast<std::size_t>(modulus), 0) {
    require_positive(modulus, "modulus");
    for (Int& x : elements) {
      x = mod(x, n_);
      if (std::gcd(x, n_) != 1 && n_ > 1) {
        throw std::invalid_argument(std::to_string(x) + " is not a unit modulo " + std::to_string(n_));
      }
      mask_[static_cast<std::size_t>(x)] = 1;
    }
    for (Int x = 0; x < n_; ++x) {
      if (mask_[static_cast<std::size_t>(x)]) elems_.push_back(x);
    }
    if (!contains(1)) throw std::invalid_argument("subgroup must contain 1");
    for (Int x : elems_) {
      if (!contains(inverse_mod(x, n_))) throw std::invalid_argument("not closed under inversion");
      for (Int y : elems_) {
        if (!contains(mulmod(x, y, n_))) throw std::invalid_argument("not closed under multiplication");
      }
    }
  }

  Int modulus() const { return n_; }
  const std::vector<Int>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(Int x) const { return mask_[static_cast<std::size_t>(mod(x, n_))] != 0; }
  bool contains_big(const BigInt& x) const { return contains(mod_big(x, n_)); }

  bool is_subset_of(const ResidueSubgroup& other) const {
    if (other.n_ != n_) return false;
    return std::all_of(elems_.begin(), elems_.end(), [&](Int x) { return other.contains(x); });
  }

  friend bool operator==(const ResidueSubgroup& x, const ResidueSubgroup& y) {
    return x.n_ == y.n_ && x.elems_ == y.elems_;
  }
  friend bool operator<(const ResidueSubgroup& x, const ResidueSubgroup& y) {
    return std::tie(x.n_, x.elems_) < std::tie(y.n_, y.elems_);
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) s += (i ? "," : "") + std::to_string(elems_[i]);
    return s + "} mod " + std::to_string(n_);
  }

 private:
  struct Trusted {};

 public:
  /// Skips the closure checks; for constructors that build closed sets.
  ResidueSubgroup(Trusted, Int modulus, const std::vector<char>& mask) : n_(modulus), mask_(mask) {
    for (Int x = 0; x < n_; ++x) {
      if (mask_[static_cast<std::size_t>(x)]) elems_.push_back(x);
    }
  }
  static ResidueSubgroup trusted(Int modulus, const std::vector<char>& mask) { return {Trusted{}, modulus, mask}; }

 private:
  Int n_;
  std::vector<char> mask_;
  std::vector<Int> elems_;
};

inline std::vector<Int> units_mod(Int n) {
  require_positive(n, "modulus");
  if (n == 1) return {0};
  std::vector<Int> out;
  for (Int x = 1; x < n; ++x) {
    if (std::gcd(x, n) == 1) out.push_back(x);
  }
  return out;
}

namespace detail {
template <class Pred>
ResidueSubgroup filter_units(Int n, Pred keep) {
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  for (Int x : units_mod(n)) mask[static_cast<std::size_t>(x)] = keep(x) ? 1 : 0;
  return ResidueSubgroup::trusted(n, mask);
}
}  // namespace detail

inline ResidueSubgroup full_unit_group(Int n) {
  return detail::filter_units(n, [](Int) { return true; });
}

/// Kernel of (Z/NZ)^x -> (Z/DZ)^x.
inline ResidueSubgroup subgroup_kernel(Int n, Int d) {
  require_positive(n, "N");
  if (d <= 0 || n % d != 0) throw std::invalid_argument("D=" + std::to_string(d) + " does not divide N=" + std::to_string(n));
  return detail::filter_units(n, [d](Int x) { return mod(x - 1, d) == 0; });
}

/// (Z/NZ)^x[m] = {x : x^m = 1}.
inline ResidueSubgroup subgroup_torsion(Int n, Int m) {
  const Int lam = carmichael_lambda(n);
  if (m <= 0 || lam % m != 0) {
    throw std::invalid_argument("m=" + std::to_string(m) + " does not divide lambda(" + std::to_string(n) + ")=" + std::to_string(lam));
  }
  return detail::filter_units(n, [n, m](Int x) { return powmod(x, m, n) == 1 % n; });
}

/// {x : x^2 = 1 mod D}.
inline ResidueSubgroup subgroup_squares_trivial(Int n, Int d) {
  if (d <= 0 || n % d != 0) throw std::invalid_argument("D must divide N");
  return detail::filter_units(n, [d](Int x) { return mulmod(x, x, d) == 1 % d; });
}

/// H * <g>, using commutativity.
inline ResidueSubgroup adjoin(const ResidueSubgroup& h, Int g) {
  const Int n = h.modulus();
  g = mod(g, n);
  if (n > 1 && std::gcd(g, n) != 1) throw std::invalid_argument(std::to_string(g) + " is not a unit modulo " + std::to_string(n));
  if (h.contains(g)) return h;
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  Int power = 1 % n;
  do {
    for (Int x : h.elements()) mask[static_cast<std::size_t>(mulmod(x, power, n))] = 1;
    power = mulmod(power, g, n);
  } while (!h.contains(power));
  return ResidueSubgroup::trusted(n, mask);
}

inline ResidueSubgroup subgroup_generated(Int n, const std::vector<Int>& gens) {
  require_positive(n, "N");
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  mask[static_cast<std::size_t>(1 % n)] = 1;
  ResidueSubgroup h = ResidueSubgroup::trusted(n, mask);
  for (Int g : gens) h = adjoin(h, g);
  return h;
}

/// Adjoins -1.
inline ResidueSubgroup pm_extend(const ResidueSubgroup& h) { return adjoin(h, h.modulus() - 1); }

/// Every subgroup of (Z/NZ)^x, ordered by size then elements.
inline std::vector<ResidueSubgroup> all_subgroups(Int n) {
  const auto units = units_mod(n);
  std::set<ResidueSubgroup> seen{subgroup_generated(n, {})};
  std::vector<ResidueSubgroup> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<ResidueSubgroup> next;
    for (const auto& h : frontier) {
      for (Int g : units) {
        if (h.contains(g)) continue;
        auto bigger = adjoin(h, g);
        if (seen.insert(bigger).second) next.push_back(std::move(bigger));
      }
    }
    frontier = std::move(next);
  }
  std::vector<ResidueSubgroup> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

/// Smallest multiple K of s_N*t_N dividing N with ker((Z/N)^x -> (Z/K)^x) inside H.
inline Int k_h(const ResidueSubgroup& h) {
  const Int n = h.modulus();
  const auto [s, t] = square_part(n);
  for (Int k : divisors(n)) {
    if (k % (s * t) != 0) continue;
    bool inside = true;
    for (Int x = 1 % k; x < n && inside; x += k) {
      if (std::gcd(x, n) == 1 || n == 1) inside = h.contains(x);
    }
    if (inside) return k;
  }
  return n;
}

/// gcd of N and all e - e^{-1}, e in H.
inline Int eta_h(const ResidueSubgroup& h) {
  const Int n = h.modulus();
  Int g = n;
  for (Int e : h.elements()) g = std::gcd(g, mod(e - inverse_mod(e, n), n));
  return g;
}

inline Int sigma_h(const ResidueSubgroup& h) { return std::gcd(h.modulus() / k_h(h), eta_h(h)); }

/// Image of t under the Atkin-Lehner action of mu: t^{-1} mod mu, t mod N/mu.
inline Int al_action(Int n, Int mu, Int t) {
  [[maybe_unused]] const ExactDivisor checked(n, mu);
  if (n > 1 && std::gcd(mod(t, n), n) != 1) throw std::invalid_argument(std::to_string(t) + " is not a unit");
  return crt(inverse_mod(t, mu), mu, mod(t, n / mu), n / mu);
}

inline bool is_al_invariant(const ResidueSubgroup& h) {
  const Int n = h.modulus();
  for (const auto& ed : exact_divisors(n)) {
    for (Int t : h.elements()) {
      if (!h.contains(al_action(n, ed.mu(), t))) return false;
    }
  }
  return true;
}

/// Membership of an integer matrix in Gamma_H.
inline bool in_gamma_h(const IntMatrix2& m, const ResidueSubgroup& h) {
  return m.det() == 1 && mod_big(m.c, h.modulus()) == 0 && h.contains_big(m.a);
}

/// The lift (e, (eh-1)/N; N, h) of diag(e, e^{-1}) mod N into Gamma_0(N).
inline IntMatrix2 diagonal_lift(Int n, Int e) {
  const Int h = inverse_mod(e, n);
  const BigInt eh = BigInt(static_cast<long>(mod(e, n))) * h;
  return {mod(e, n), (eh - 1) / n, n, h};
}

}  // namespace congnorm
