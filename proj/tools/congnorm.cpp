// congnorm: normalizers of congruence subgroups, lattice automorphisms and
// verification sweeps from the command line.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or invalid input,
// 3 a closed form disagrees with the definition-level computation.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "congnorm/lattice.hpp"
#include "congnorm/normalizer.hpp"
#include "congnorm/oracle.hpp"
#include "congnorm/verify.hpp"

using congnorm::Int;
using congnorm::Rational;
using Json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kDisagreement = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string num(Int x) { return std::to_string(x); }
std::string num(const Rational& q) { return q.get_str(); }

Json num_list(const std::vector<Int>& xs) {
  Json out = Json::array();
  for (Int x : xs) out.push_back(num(x));
  return out;
}

Int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<Int>(v);
  } catch (const std::exception&) {
    throw UsageError("invalid " + what + ": '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------- subgroups

struct ParsedSubgroup {
  congnorm::ResidueSubgroup group;
  std::string kind;  // kernel, torsion, gen, pm:kernel, ...
  Int param = 0;
};

ParsedSubgroup parse_subgroup(Int n, const std::string& spec) {
  auto value_after = [&](const std::string& body, const std::string& key) {
    if (body.rfind(key + "=", 0) != 0) throw UsageError("expected " + key + "=<value> in '" + spec + "'");
    return parse_int(body.substr(key.size() + 1), key);
  };
  try {
    if (spec.rfind("kernel:", 0) == 0) {
      const Int d = value_after(spec.substr(7), "D");
      if (d <= 0 || n % d != 0) throw UsageError("D=" + num(d) + " does not divide N=" + num(n));
      return {congnorm::subgroup_kernel(n, d), "kernel", d};
    }
    if (spec.rfind("torsion:", 0) == 0) {
      const Int m = value_after(spec.substr(8), "m");
      if (m <= 0 || congnorm::carmichael_lambda(n) % m != 0) {
        throw UsageError("m=" + num(m) + " does not divide lambda(N)=" + num(congnorm::carmichael_lambda(n)));
      }
      return {congnorm::subgroup_torsion(n, m), "torsion", m};
    }
    if (spec.rfind("gen:", 0) == 0) {
      std::vector<Int> gens;
      for (const auto& g : split(spec.substr(4), ',')) gens.push_back(parse_int(g, "generator"));
      return {congnorm::subgroup_generated(n, gens), "gen", 0};
    }
    if (spec.rfind("pm:", 0) == 0) {
      const ParsedSubgroup inner = parse_subgroup(n, spec.substr(3));
      return {congnorm::pm_extend(inner.group), "pm:" + inner.kind, inner.param};
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown subgroup spec '" + spec + "' (kernel:D=, torsion:m=, gen:a,b,..., pm:<spec>)");
}

Json subgroup_json(const congnorm::ResidueSubgroup& h) {
  return {{"modulus", num(h.modulus())}, {"order", num(static_cast<Int>(h.size()))}, {"elements", num_list(h.elements())}};
}

/// Every standard name that fits H; `prefer_squares` puts Gamma_1^[2] ahead
/// of Gamma_0 when both apply.
std::vector<std::string> group_names(const congnorm::ResidueSubgroup& h, bool prefer_squares) {
  const Int n = h.modulus();
  const bool full = h == congnorm::full_unit_group(n);
  const bool squares = h == congnorm::subgroup_torsion(n, std::gcd(Int{2}, congnorm::carmichael_lambda(n)));
  std::vector<std::string> out;
  if (h.size() == 1) out.push_back("Gamma_1(" + num(n) + ")");
  if (squares && prefer_squares) out.push_back("Gamma_1^[2](" + num(n) + ")");
  if (full) out.push_back("Gamma_0(" + num(n) + ")");
  if (squares && !prefer_squares) out.push_back("Gamma_1^[2](" + num(n) + ")");
  out.push_back("Gamma_H(" + num(n) + ")");
  return out;
}

void require_level(Int n) {
  if (n <= 0) throw UsageError("level must be positive");
}

// ---------------------------------------------------------------- commands

struct Outcome {
  Json report;
  int code = kOk;
};

Outcome cmd_normalizer(Int n, const std::string& spec) {
  require_level(n);
  const ParsedSubgroup ps = parse_subgroup(n, spec);
  const auto& h = ps.group;
  const auto nz = congnorm::normalizer_of(h);
  const Int sigma = nz.sigma;

  Json closed = Json::array();
  auto add_closed = [&](const std::string& name, Int value) {
    closed.push_back({{"form", name}, {"sigma", num(value)}, {"agrees", value == sigma}});
  };
  if (ps.kind == "kernel") add_closed("kernel", congnorm::sigma_kernel_closed_form(n, ps.param));
  if (ps.kind == "torsion") add_closed("torsion", congnorm::sigma_torsion_closed_form(n, ps.param));
  if (ps.kind == "pm:kernel") add_closed("pm-kernel", congnorm::sigma_pm_kernel(n, ps.param));
  const auto fac = congnorm::factorize(n);
  if (fac.size() == 1) {
    add_closed("prime-power", congnorm::sigma_primepower(fac[0].p, fac[0].e, h).sigma);
  }
  bool agree = true;
  for (const auto& c : closed) agree = agree && c["agrees"].get<bool>();

  const auto idx = nz.index_over_gamma0();
  Json results = {
      {"sigma", num(sigma)},
      {"k_h", num(congnorm::k_h(h))},
      {"eta_h", num(congnorm::eta_h(h))},
      {"is_full_group", nz.is_full_group},
      {"proper_subset", !nz.is_full_group},
      {"passing_mu", num_list(nz.passing_mu)},
      {"failing_mu", num_list(nz.failing_mu)},
      {"index_over_gamma0", idx ? Json(num(*idx)) : Json(nullptr)},
      {"closed_forms", closed},
      {"group", group_names(h, false).front()},
      {"group_names", group_names(h, false)},
      {"subgroup", subgroup_json(h)},
      {"normalizer", nz.is_full_group ? "Gamma_0^{*," + num(sigma) + "}(" + num(n) + ")"
                                      : "proper subgroup of Gamma_0^{*," + num(sigma) + "}(" + num(n) + ")"},
  };
  return {{{"command", "normalizer"},
           {"inputs", {{"level", num(n)}, {"subgroup", spec}}},
           {"results", results},
           {"status", agree ? "ok" : "disagreement"}},
          agree ? kOk : kDisagreement};
}

Json rat_matrix3(const congnorm::RatMatrix3& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(num(x));
    out.push_back(r);
  }
  return out;
}

Outcome cmd_lattice(Int n, Int d, const std::string& query) {
  require_level(n);
  if (d <= 0 || n % d != 0) throw UsageError("D=" + num(d) + " does not divide N=" + num(n));
  const auto l = congnorm::lattice_nd(n, d);
  const bool all = query == "all";
  Json results = Json::object();
  if (all || query == "gram") {
    const auto g = congnorm::gram(l);
    results["gram"] = rat_matrix3(g);
    results["gram_determinant"] = num(congnorm::gram_determinant(g));
  }
  if (all || query == "saut") {
    const Int s = congnorm::saut_plus_sigma(l);
    results["saut_sigma"] = num(s);
    results["saut_group"] = "Gamma_0^{*," + num(s) + "}(" + num(n) + ")";
  }
  if (all || query == "kernel") {
    const auto h = congnorm::discriminant_kernel(l);
    results["kernel"] = {{"group", group_names(h, true).front()},
                         {"group_names", group_names(h, true)}, {"description", "x^2 = 1 mod " + num(d)}, {"subgroup", subgroup_json(h)}};
  }
  if (all || query == "disc") {
    const auto o = congnorm::disc_orders(l);
    results["disc_orders"] = num_list({o[0], o[1], o[2]});
    results["disc_order"] = num(o[0] * o[1] * o[2]);
  }
  if (all || query == "iso") {
    const auto inv = congnorm::iso_invariants(l);
    Json counts = Json::array();
    for (const auto& [p, c] : inv.subgroup_counts) counts.push_back({{"p", num(p)}, {"count", num(c)}});
    results["iso_invariants"] = {{"rescale_min", num(inv.rescale_min)}, {"disc_order", num(inv.disc_order)}, {"subgroup_counts", counts}};
  }
  if (results.empty()) throw UsageError("unknown lattice query '" + query + "' (gram, saut, kernel, disc, iso, all)");
  return {{{"command", "lattice"},
           {"inputs", {{"N", num(n)}, {"D", num(d)}, {"query", query}}},
           {"results", results},
           {"status", "ok"}}};
}

Json elem_json(const congnorm::GammaStarElem& x) {
  return {{"mu", num(x.mu())}, {"a", num(x.a())}, {"b", num(x.b())}, {"c", num(x.c())}, {"d", num(x.d())}};
}

Outcome cmd_element(Int n, const std::string& elem, const std::string& spec) {
  require_level(n);
  const auto parts = split(elem, ',');
  if (parts.size() != 5) throw UsageError("--elem expects mu,a,b,c,d");
  std::optional<congnorm::GammaStarElem> x;
  try {
    x = congnorm::elem_new(n, parse_int(parts[0], "mu"), congnorm::parse_rational(parts[1]), congnorm::parse_rational(parts[2]),
                           congnorm::parse_rational(parts[3]), congnorm::parse_rational(parts[4]));
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto m = congnorm::matrix_of(*x);
  Json pres = Json::array();
  for (const auto& p : congnorm::presentations(*x)) pres.push_back(elem_json(p));
  Json results = {
      {"element", elem_json(*x)},
      {"matrix", Json::array({Json::array({m.e.str(), m.f.str()}), Json::array({m.g.str(), m.h.str()})})},
      {"sigma_level", num(congnorm::sigma_level(*x))},
      {"normalized", elem_json(congnorm::normalize_presentation(*x))},
      {"presentations", pres},
  };
  Json inputs = {{"level", num(n)}, {"elem", elem}};
  if (!spec.empty()) {
    const ParsedSubgroup ps = parse_subgroup(n, spec);
    inputs["subgroup"] = spec;
    results["normalizes"] = congnorm::normalizes_element(*x, ps.group);
    if (n <= congnorm::kDefaultOracleBound) {
      results["oracle_normalizes"] = congnorm::oracle_normalizes(*x, ps.group);
    }
  }
  const bool agree = !results.contains("oracle_normalizes") || results["oracle_normalizes"] == results["normalizes"];
  return {{{"command", "element"}, {"inputs", inputs}, {"results", results}, {"status", agree ? "ok" : "disagreement"}},
          agree ? kOk : kDisagreement};
}

Outcome cmd_index(Int n, Int sigma) {
  require_level(n);
  const Int s = congnorm::square_part(n).s;
  if (sigma <= 0 || s % sigma != 0) throw UsageError("sigma=" + num(sigma) + " does not divide s_N=" + num(s));
  const Int idx = congnorm::index_over_gamma0(n, sigma);
  const Int small = n / (sigma * sigma);
  const Int factor = idx / congnorm::ipow(2, congnorm::count_prime_divisors(small));
  Json results = {{"index_over_gamma0", num(idx)}, {"conjugated_kernel_factor", num(factor)}, {"s_n", num(s)}};
  bool agree = true;
  if (n / sigma <= congnorm::kDefaultOracleBound) {
    const Int big = congnorm::coset_index(congnorm::gamma00_image(n / sigma, sigma));
    const Int base = congnorm::coset_index(congnorm::gamma0_image(small));
    agree = big % base == 0 && big / base == factor;
    results["coset_check"] = {{"cosets_gamma00", num(big)}, {"cosets_gamma0", num(base)}, {"agrees", agree}};
  }
  return {{{"command", "index"},
           {"inputs", {{"level", num(n)}, {"sigma", num(sigma)}}},
           {"results", results},
           {"status", agree ? "ok" : "disagreement"}},
          agree ? kOk : kDisagreement};
}

Outcome cmd_verify(const std::string& suite_name, std::optional<Int> max_level) {
  const auto suite = congnorm::parse_suite(suite_name);
  if (!suite) throw UsageError("unknown suite '" + suite_name + "' (closed-forms, oracle, lattice, all)");
  congnorm::VerifyLimits lim;
  if (max_level) {
    if (*max_level <= 0) throw UsageError("--max-level must be positive");
    lim.max_level = *max_level;
  }
  if (const char* env = std::getenv("CONGNORM_MAX_LEVEL"); env && *env) {
    lim.max_level = std::min(lim.max_level, parse_int(env, "CONGNORM_MAX_LEVEL"));
    if (lim.max_level <= 0) throw UsageError("CONGNORM_MAX_LEVEL must be positive");
  }
  Json criteria = Json::array();
  bool ok = true;
  for (int id : congnorm::suite_criteria(*suite)) {
    const auto r = congnorm::run_criterion(id, lim);
    const std::string status = r.skipped ? "skipped" : (r.passed() ? "pass" : "fail");
    ok = ok && (r.skipped || r.passed());
    criteria.push_back({{"id", num(id)},
                        {"title", r.title},
                        {"status", status},
                        {"checked", num(static_cast<Int>(r.checked))},
                        {"cases", r.cases},
                        {"failures", r.failures},
                        {"note", r.note}});
  }
  Json inputs = {{"suite", suite_name}, {"max_level", lim.max_level == congnorm::VerifyLimits{}.max_level ? Json(nullptr) : Json(num(lim.max_level))}};
  return {{{"command", "verify"}, {"inputs", inputs}, {"results", {{"criteria", criteria}}}, {"status", ok ? "pass" : "fail"}},
          ok ? kOk : kVerifyFailed};
}

// ---------------------------------------------------------------- output

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void print_table(const Json& v, const std::string& prefix, std::ostream& os) {
  if (v.is_object()) {
    for (const auto& [k, sub] : v.items()) {
      const std::string key = prefix.empty() ? k : prefix + "." + k;
      if (k == "cases" && sub.is_array()) {
        os << key << ": " << sub.size() << " checked\n";
      } else {
        print_table(sub, key, os);
      }
    }
    return;
  }
  if (v.is_array()) {
    const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
    if (flat) {
      os << prefix << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
      os << "]\n";
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) print_table(v[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << prefix << ": " << scalar(v) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalizers of congruence subgroups and lattice automorphism groups"};
  app.require_subcommand(1);
  std::string format = "table";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}));

  Int level = 0;
  Int lat_d = 0;
  Int sigma = 0;
  std::string spec;
  std::string elem;
  std::string query = "all";
  std::string suite = "all";
  std::optional<Int> max_level;

  auto* normalizer = app.add_subcommand("normalizer", "Normalizer of Gamma_H(N)")->fallthrough();
  normalizer->add_option("--level,-N", level, "Level N")->required();
  normalizer->add_option("--subgroup", spec, "kernel:D=d, torsion:m=m, gen:a,b,..., pm:<spec>")->required();

  auto* lattice = app.add_subcommand("lattice", "The lattice L(N, D)")->fallthrough();
  lattice->add_option("--N,--level", level, "Level N")->required();
  lattice->add_option("--D", lat_d, "Divisor D of N")->required();
  lattice->add_option("query", query, "gram, saut, kernel, disc, iso or all");

  auto* element = app.add_subcommand("element", "Membership, sigma-level and presentations of an element")->fallthrough();
  element->add_option("--level,-N", level, "Level N")->required();
  element->add_option("--elem", elem, "mu,a,b,c,d with rationals as p/q")->required();
  element->add_option("--subgroup", spec, "Also test normalization of this subgroup");

  auto* index = app.add_subcommand("index", "[Gamma_0^{*,sigma}(N) : Gamma_0(N)]")->fallthrough();
  index->add_option("--level,-N", level, "Level N")->required();
  index->add_option("--sigma", sigma, "Divisor sigma of s_N")->required();

  auto* verify = app.add_subcommand("verify", "Run verification sweeps")->fallthrough();
  verify->add_option("--suite", suite, "closed-forms, oracle, lattice or all");
  verify->add_option("--max-level", max_level, "Cap on every sweep's level range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Outcome out;
  try {
    if (*normalizer) out = cmd_normalizer(level, spec);
    if (*lattice) out = cmd_lattice(level, lat_d, query);
    if (*element) out = cmd_element(level, elem, spec);
    if (*index) out = cmd_index(level, sigma);
    if (*verify) out = cmd_verify(suite, max_level);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (format == "json") {
    std::cout << out.report.dump(2) << "\n";
  } else {
    print_table(out.report, "", std::cout);
  }
  return out.code;
}
