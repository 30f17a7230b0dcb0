// Group-theoretic oracles: right-coset enumeration of congruence subgroups
// of SL_2(Z) through their image mod N, Schreier generators, and normalizer
// tests by exact conjugation of those generators.
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "congnorm/gamma_star.hpp"
#include "congnorm/numtheory.hpp"
#include "congnorm/sqrt_rational.hpp"
#include "congnorm/subgroups.hpp"

namespace congnorm {

inline constexpr Int kDefaultOracleBound = 30;

struct BoundExceeded : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Residues of an integer matrix modulo the level, row-major.
using ModMatrix = std::array<Int, 4>;

/// A congruence subgroup described by its image in SL_2(Z/N). Every group
/// here contains Gamma(N), so membership of an integer matrix is decided by
/// its residues.
struct ModImage {
  Int level = 1;
  std::string name;
  std::function<bool(const ModMatrix&)> contains_mod;

  bool contains(const IntMatrix2& m) const {
    if (m.det() != 1) return false;
    return contains_mod({mod_big(m.a, level), mod_big(m.b, level), mod_big(m.c, level), mod_big(m.d, level)});
  }
};

/// Upper triangular mod N with upper-left entry in H.
inline ModImage gamma_h_image(const ResidueSubgroup& h) {
  const Int n = h.modulus();
  return {n, "Gamma_H(" + std::to_string(n) + ")", [h, n](const ModMatrix& m) {
            return m[2] % n == 0 && (n == 1 || h.contains(m[0]));
          }};
}

inline ModImage gamma0_image(Int n) { return gamma_h_image(full_unit_group(n)); }

/// Gamma_0^0(M, D) = {c = 0 mod M, b = 0 mod D}, for D | M; level M.
inline ModImage gamma00_image(Int m, Int d) {
  require_positive(m, "M");
  if (d <= 0 || m % d != 0) throw std::invalid_argument("Gamma_0^0(M, D) needs D | M");
  return {m, "Gamma_0^0(" + std::to_string(m) + "," + std::to_string(d) + ")",
          [m, d](const ModMatrix& x) { return x[2] % m == 0 && mod(x[1], d) == 0; }};
}

/// Gamma_{0,1}(N, D): Gamma_0(N) with diagonal = 1 mod D.
inline ModImage gamma01_image(Int n, Int d) { return gamma_h_image(subgroup_kernel(n, d)); }

/// |SL_2(Z/N)| = N^3 prod_{p|N} (1 - 1/p^2).
inline Int sl2_order(Int n) {
  require_positive(n, "N");
  Int r = n * n * n;
  for (Int p : prime_divisors(n)) r = r / (p * p) * (p * p - 1);
  return r;
}

/// Size of the image, by scanning all of SL_2(Z/N).
inline Int image_order(const ModImage& g) {
  const Int n = g.level;
  Int count = 0;
  for (Int a = 0; a < n; ++a) {
    for (Int b = 0; b < n; ++b) {
      for (Int c = 0; c < n; ++c) {
        for (Int d = 0; d < n; ++d) {
          if (mod(a * d - b * c, n) == 1 % n && g.contains_mod({a, b, c, d})) ++count;
        }
      }
    }
  }
  return count;
}

struct CosetTable {
  ModImage group;
  /// reps[0] is the identity.
  std::vector<IntMatrix2> reps;
  /// next[0] is right multiplication by S, next[1] by T.
  std::array<std::vector<std::size_t>, 2> next;

  std::size_t size() const { return reps.size(); }
};

namespace detail {

inline ModMatrix reduce(const IntMatrix2& m, Int n) {
  return {mod_big(m.a, n), mod_big(m.b, n), mod_big(m.c, n), mod_big(m.d, n)};
}

/// x * y^{-1} mod n for determinant-one residues.
inline ModMatrix times_inverse(const ModMatrix& x, const ModMatrix& y, Int n) {
  const ModMatrix yi{y[3], mod(-y[1], n), mod(-y[2], n), y[0]};
  return {mod(x[0] * yi[0] + x[1] * yi[2], n), mod(x[0] * yi[1] + x[1] * yi[3], n),
          mod(x[2] * yi[0] + x[3] * yi[2], n), mod(x[2] * yi[1] + x[3] * yi[3], n)};
}

}  // namespace detail

/// Breadth-first enumeration of the right cosets Gamma g under S and T.
/// Gamma g1 = Gamma g2 iff g1 g2^{-1} reduces into the image; this uses that
/// Gamma surjects onto its image mod N.
inline CosetTable enumerate_cosets(const ModImage& group, Int bound = kDefaultOracleBound) {
  if (group.level > bound) {
    throw BoundExceeded("level " + std::to_string(group.level) + " exceeds oracle bound " +
                        std::to_string(bound));
  }
  const Int n = group.level;
  const std::array<IntMatrix2, 2> gens{IntMatrix2::S(), IntMatrix2::T()};
  CosetTable t{group, {IntMatrix2::identity()}, {}};
  std::vector<ModMatrix> residues{detail::reduce(IntMatrix2::identity(), n)};

  auto find = [&](const ModMatrix& r) -> std::size_t {
    for (std::size_t i = 0; i < residues.size(); ++i) {
      if (group.contains_mod(detail::times_inverse(r, residues[i], n))) return i;
    }
    return residues.size();
  };

  for (std::size_t i = 0; i < t.reps.size(); ++i) {
    for (std::size_t x = 0; x < 2; ++x) {
      const IntMatrix2 g = t.reps[i] * gens[x];
      const ModMatrix r = detail::reduce(g, n);
      std::size_t j = find(r);
      if (j == residues.size()) {
        t.reps.push_back(g);
        residues.push_back(r);
      }
      t.next[x].resize(t.reps.size(), 0);
      t.next[x][i] = j;
    }
  }
  for (auto& v : t.next) v.resize(t.reps.size());
  return t;
}

inline CosetTable enumerate_cosets(const ResidueSubgroup& h, Int bound = kDefaultOracleBound) {
  return enumerate_cosets(gamma_h_image(h), bound);
}

/// [SL_2(Z) : group] by coset enumeration.
inline Int coset_index(const ModImage& group, Int bound = kDefaultOracleBound) {
  return static_cast<Int>(enumerate_cosets(group, bound).size());
}

struct SchreierGenSet {
  std::vector<IntMatrix2> gens;
};

/// r * x * rep(r x)^{-1} over coset reps r and x in {S, T}, without the
/// identity and without repeats.
inline SchreierGenSet schreier_generators(const CosetTable& t) {
  const std::array<IntMatrix2, 2> gens{IntMatrix2::S(), IntMatrix2::T()};
  SchreierGenSet out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t x = 0; x < 2; ++x) {
      const IntMatrix2 g = t.reps[i] * gens[x] * t.reps[t.next[x][i]].inverse();
      if (g == IntMatrix2::identity()) continue;
      bool seen = false;
      for (const auto& k : out.gens) {
        if (k == g) {
          seen = true;
          break;
        }
      }
      if (!seen) out.gens.push_back(g);
    }
  }
  return out;
}

/// A coset table with its Schreier generators, built once per group.
class GroupOracle {
 public:
  explicit GroupOracle(const ModImage& group, Int bound = kDefaultOracleBound)
      : table_(enumerate_cosets(group, bound)), gens_(schreier_generators(table_)) {}
  explicit GroupOracle(const ResidueSubgroup& h, Int bound = kDefaultOracleBound)
      : GroupOracle(gamma_h_image(h), bound) {}

  const CosetTable& table() const { return table_; }
  const SchreierGenSet& generators() const { return gens_; }
  Int level() const { return table_.group.level; }

  bool contains(const Matrix2& m) const {
    return m.is_integral() && table_.group.contains(to_int_matrix(m));
  }

  /// A g A^{-1} and A^{-1} g A stay in the group for every generator g.
  bool normalizes(const Matrix2& a) const {
    const Matrix2 ai = a.inverse();
    for (const auto& g : gens_.gens) {
      const Matrix2 gm = g.as_matrix();
      if (!contains(a * gm * ai) || !contains(ai * gm * a)) return false;
    }
    return true;
  }

  bool normalizes(const GammaStarElem& a) const {
    if (a.level() != level()) throw LevelMismatch("element level does not match the group");
    return normalizes(matrix_of(a));
  }

 private:
  CosetTable table_;
  SchreierGenSet gens_;
};

inline bool oracle_normalizes(const GammaStarElem& a, const ResidueSubgroup& h, Int bound = kDefaultOracleBound) {
  return GroupOracle(h, bound).normalizes(a);
}

/// Elements for comparing the residue test with the oracle: per exact
/// divisor mu, Atkin-Lehner-type members of Gamma_0^{*,sigma}(N) over several
/// residue classes, the same wrapped in integer matrices, and one element of
/// each sigma-level in s_N that does not divide sigma.
inline std::vector<GammaStarElem> oracle_probe_set(Int level, Int sigma) {
  const Int s = square_part(level).s;
  const GammaStarElem t = GammaStarElem::from_gamma0(level, IntMatrix2{1, 1, 0, 1});
  const GammaStarElem l = GammaStarElem::from_gamma0(level, IntMatrix2{1, 0, level, 1});
  std::vector<GammaStarElem> out;
  for (const auto& ed : exact_divisors(level)) {
    for (Int shift = 0; shift < 4; ++shift) {
      const GammaStarElem x = atkin_lehner_type(level, ed.mu(), sigma, shift);
      out.push_back(x);
      out.push_back(t * x * l);
    }
    for (Int other : divisors(s)) {
      if (sigma % other != 0) out.push_back(l * atkin_lehner_type(level, ed.mu(), other));
    }
  }
  return out;
}

/// Upper and lower unipotents (1, 1/s; 0, 1) and (1, 0; N/s, 1) as elements.
inline GammaStarElem upper_unipotent(Int level, Int sigma) {
  return elem_new(level, 1, 1, make_rational(1, sigma), 0, 1);
}
inline GammaStarElem lower_unipotent(Int level, Int sigma) {
  return elem_new(level, 1, 1, 0, make_rational(1, sigma), 1);
}

/// Largest sigma | s_N whose boundary elements all normalize Gamma_H: both
/// unipotents, and the Atkin-Lehner-type element of level sigma for every mu
/// whose level-one element normalizes. Passing levels must form the divisors
/// of the answer; anything else throws std::logic_error.
inline Int oracle_sigma(const GroupOracle& oracle, const ResidueSubgroup& h) {
  const Int n = h.modulus();
  if (oracle.level() != n) throw LevelMismatch("oracle level does not match the subgroup");
  std::vector<Int> active_mu;
  for (const auto& ed : exact_divisors(n)) {
    if (oracle.normalizes(atkin_lehner_type(n, ed.mu(), 1))) active_mu.push_back(ed.mu());
  }
  auto passes = [&](Int sigma) {
    if (!oracle.normalizes(upper_unipotent(n, sigma)) || !oracle.normalizes(lower_unipotent(n, sigma))) {
      return false;
    }
    for (Int mu : active_mu) {
      if (!oracle.normalizes(atkin_lehner_type(n, mu, sigma))) return false;
    }
    return true;
  };
  const Int s = square_part(n).s;
  std::vector<Int> passing;
  for (Int sigma : divisors(s)) {
    if (passes(sigma)) passing.push_back(sigma);
  }
  const Int best = passing.empty() ? 0 : passing.back();
  for (Int sigma : divisors(s)) {
    const bool divides = best != 0 && best % sigma == 0;
    if (divides != std::binary_search(passing.begin(), passing.end(), sigma)) {
      throw std::logic_error("passing sigma-levels at N=" + std::to_string(n) + " are not the divisors of one value");
    }
  }
  return best;
}

inline Int oracle_sigma(const ResidueSubgroup& h, Int bound = kDefaultOracleBound) {
  return oracle_sigma(GroupOracle(h, bound), h);
}

}  // namespace congnorm
