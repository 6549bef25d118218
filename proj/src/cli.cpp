#include "knotcert/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "knotcert/branched_cover.hpp"
#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"
#include "knotcert/number_theory.hpp"
#include "knotcert/obstruction.hpp"
#include "knotcert/seifert.hpp"

namespace knotcert::cli {

using nlohmann::json;

namespace {

/// Everything that determines a run's output.
struct RunConfig {
  std::string format = "table";
  std::string out_path;
  unsigned jobs = 1;
  std::uint64_t budget = kDefaultSubspaceBudget;
  std::optional<std::uint64_t> seed;

  std::int64_t m = 1;
  unsigned q = 3;
  std::uint64_t p = 7;
  std::size_t n = 1;
  std::string knot;
  std::string companion = "trefoil";
  std::optional<std::int64_t> c;
  std::string mode = "refined";
  std::string bound = "0";
  std::uint64_t u = 1;
  bool all_units = false;
  bool through = false;
  std::string sum_path;

  std::size_t count = 5;
  std::uint64_t bound_search = 100000;
  bool family = false;

  std::string family_path;
  std::string coeffs;
  std::string cert_path;
};

std::string s(std::uint64_t v) { return std::to_string(v); }
std::string s(std::int64_t v) { return std::to_string(v); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw PreconditionError("malformed JSON in " + path + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::int64_t> parse_coefficients(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw PreconditionError("bad coefficient '" + item + "' in --coeffs");
    }
  }
  if (out.empty()) throw PreconditionError("--coeffs is empty");
  return out;
}

void require_odd_prime(std::uint64_t p) {
  if (p == 2 || !modular::is_prime(p)) throw PreconditionError("p=" + s(p) + " is not an odd prime");
}

// -- verbs -------------------------------------------------------------------

std::string cover_homology_verb(const RunConfig& cfg) {
  CoverHomology h;
  std::string subject;
  if (!cfg.knot.empty()) {
    h = cover_homology(parse_knot_spec(cfg.knot), cfg.q);
    subject = canonical_knot_spec(cfg.knot);
  } else {
    h = twisted_cover_homology(cfg.m, cfg.q);
    subject = "K_{2m+1}, m=" + s(cfg.m);
  }
  if (cfg.format == "json") {
    json factors = json::array();
    for (const auto& d : h.invariant_factors) factors.push_back(d.get_str());
    json j = {{"schema", "1"}, {"kind", "cover_homology"}, {"q", s(std::uint64_t{cfg.q})},
              {"invariant_factors", factors}, {"group", h.group_string()}, {"order", h.order().get_str()}};
    if (!cfg.knot.empty()) {
      j["knot"] = subject;
    } else {
      j["m"] = s(cfg.m);
    }
    if (h.a) j["a"] = h.a->get_str();
    return canonical_dump(j);
  }
  std::ostringstream out;
  out << "H_1(M_" << cfg.q << ") of " << subject << " = " << h.group_string() << "\n";
  if (h.a) out << "a = |(m+1)^" << cfg.q << " - m^" << cfg.q << "| = " << h.a->get_str() << "\n";
  return out.str();
}

std::string signature_verb(const RunConfig& cfg) {
  const std::string spec = canonical_knot_spec(cfg.knot.empty() ? std::string("trefoil") : cfg.knot);
  const SeifertMatrix k = parse_knot_spec(spec);
  const auto modulus = static_cast<std::int64_t>(cfg.p);
  std::vector<std::int64_t> points;
  if (cfg.c) {
    points.push_back(*cfg.c);
  } else {
    for (std::int64_t c = 0; c < modulus; ++c) points.push_back(c);
  }
  std::vector<SignatureValue> values;
  for (auto c : points) values.push_back(tristram_levine_signature(k, c, modulus));
  if (cfg.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
      rows.push_back({{"c", s(points[i])}, {"signature", std::to_string(values[i].value)},
                      {"degenerate", values[i].degenerate}});
    return canonical_dump({{"schema", "1"}, {"kind", "signature"}, {"knot", spec}, {"modulus", s(cfg.p)},
                           {"alexander", alexander_polynomial(k).to_string()}, {"values", rows}});
  }
  std::ostringstream out;
  out << "knot " << spec << ", Alexander polynomial " << alexander_polynomial(k).to_string() << "\n";
  out << std::setw(6) << "c" << std::setw(12) << "sigma_c/" + s(cfg.p) << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << std::setw(6) << points[i] << std::setw(12) << values[i].value;
    if (values[i].degenerate) out << "  (Alexander root)";
    out << "\n";
  }
  return out.str();
}

std::string primes_verb(const RunConfig& cfg) {
  json list = json::array();
  std::ostringstream out;
  if (cfg.family) {
    const auto family = number_theory::select_independent_family(cfg.count, static_cast<std::int64_t>(cfg.bound_search));
    out << std::setw(8) << "m" << std::setw(14) << "F(m)" << std::setw(10) << "p" << "\n";
    for (const auto& f : family) {
      const BigInt value = number_theory::cubic_difference(BigInt(s(f.m)));
      list.push_back({{"m", s(f.m)}, {"F", value.get_str()}, {"p", s(f.witness.p)},
                      {"exponent", std::to_string(f.witness.exponent)}});
      out << std::setw(8) << f.m << std::setw(14) << value.get_str() << std::setw(10) << f.witness.p << "\n";
    }
  } else {
    const auto witnesses = number_theory::list_prime_witnesses(cfg.count, cfg.bound_search, cfg.seed);
    out << std::setw(10) << "p" << std::setw(8) << "p mod 3" << std::setw(10) << "m" << std::setw(14) << "F(m)"
        << std::setw(10) << "exponent" << "\n";
    for (const auto& w : witnesses) {
      const BigInt value = number_theory::cubic_difference(BigInt(s(w.m)));
      list.push_back({{"p", s(w.p)}, {"m", s(w.m)}, {"F", value.get_str()}, {"exponent", std::to_string(w.exponent)}});
      out << std::setw(10) << w.p << std::setw(8) << w.p % 3 << std::setw(10) << w.m << std::setw(14)
          << value.get_str() << std::setw(10) << w.exponent << "\n";
    }
  }
  if (cfg.format == "json")
    return canonical_dump({{"schema", "1"}, {"kind", cfg.family ? "family" : "prime_witnesses"}, {"witnesses", list}});
  return out.str();
}

std::string deck_verb(const RunConfig& cfg) {
  require_odd_prime(cfg.p);
  if (cfg.q == 3 && cfg.p % 3 == 2) {
    throw PreconditionError("p=" + s(cfg.p) + " is 2 mod 3, so it never divides F(m) = 3m^2 + 3m + 1");
  }
  const DeckAction d = deck_action(cfg.m, cfg.q, cfg.p);
  const std::uint64_t product = modular::mul_mod(d.lambda_plus, d.lambda_minus, cfg.p);
  const std::uint64_t power = modular::pow_mod(d.lambda_plus, cfg.q, cfg.p);
  if (cfg.format == "json") {
    return canonical_dump({{"schema", "1"}, {"kind", "deck"}, {"m", s(cfg.m)}, {"q", s(std::uint64_t{cfg.q})},
                           {"p", s(cfg.p)}, {"lambda_plus", s(d.lambda_plus)}, {"lambda_minus", s(d.lambda_minus)},
                           {"eigenbasis", {{"lambda_plus", {"L1", "L2'"}}, {"lambda_minus", {"L2", "L1'"}}}}});
  }
  std::ostringstream out;
  out << "m=" << cfg.m << " q=" << cfg.q << " p=" << cfg.p << "\n"
      << "lambda+ = " << d.lambda_plus << "  on L1, L2'\n"
      << "lambda- = " << d.lambda_minus << "  on L2, L1'\n"
      << "lambda+ * lambda- = " << product << ", lambda+^" << cfg.q << " = " << power << " (mod " << cfg.p << ")\n";
  return out.str();
}

std::string summarize(const ObstructionCertificate& c) {
  std::ostringstream out;
  out << "p=" << c.p << " q=" << c.q << " u=" << c.u << " summands=" << c.knot.summands.size()
      << " mode=" << c.mode.name();
  if (c.mode.bounded()) out << " C=" << c.mode.bound_text;
  out << "\n";
  out << "deck eigenvalues: " << c.mu_plus << ", " << c.mu_minus << "\n";
  out << "metabolizers: " << c.metabolizer_count.get_str() << "\n";
  // histogram of totals by dimension of the mu_plus part
  std::map<std::size_t, std::map<long, std::size_t>> hist;
  for (const auto& r : c.records) ++hist[r.plus_dim][r.sum.signature_total];
  out << "  dim(H meet E+)  signature totals (value x count)\n";
  for (const auto& [dim, totals] : hist) {
    out << "  " << std::setw(14) << dim << "  ";
    for (const auto& [t, n] : totals) out << t << " x" << n << "  ";
    out << "\n";
  }
  if (c.min_orbit_magnitude) out << "smallest orbit-sum magnitude: " << *c.min_orbit_magnitude << "\n";
  if (c.refined_verdict) out << "refined verdict: " << to_string(*c.refined_verdict) << "\n";
  if (c.bounded_verdict) out << "bounded verdict: " << to_string(*c.bounded_verdict) << "\n";
  out << "verdict: " << to_string(c.verdict) << "\n";
  return out.str();
}

CertifyOptions options_from(const RunConfig& cfg, std::uint64_t u) {
  CertifyOptions o;
  o.u = u;
  o.budget = cfg.budget;
  o.jobs = cfg.jobs;
  return o;
}

std::string obstruct_verb(const RunConfig& cfg) {
  require_odd_prime(cfg.p);
  if (cfg.q == 3 && cfg.p % 3 == 2) {
    throw PreconditionError("p=" + s(cfg.p) + " is 2 mod 3, so it never divides F(m) = 3m^2 + 3m + 1");
  }
  const ModeSpec mode = ModeSpec::parse(cfg.mode, cfg.bound);
  std::vector<SatelliteSum> knots;
  if (!cfg.sum_path.empty()) {
    knots.push_back(satellite_from_json(read_json_file(cfg.sum_path)));
  } else if (cfg.through) {
    for (std::size_t n = 1; n <= cfg.n; ++n) knots.push_back(SatelliteSum::amphicheiral(cfg.m, cfg.companion, n));
  } else {
    knots.push_back(SatelliteSum::amphicheiral(cfg.m, cfg.companion, cfg.n));
  }
  std::vector<ObstructionCertificate> certs;
  if (cfg.all_units) {
    if (knots.size() != 1) throw PreconditionError("--all-units and --through cannot be combined");
    for (std::uint64_t u = 1; u < cfg.p; ++u)
      certs.push_back(certify_nonslice(knots.front(), cfg.p, cfg.q, mode, options_from(cfg, u)));
  } else {
    for (const auto& k : knots) certs.push_back(certify_nonslice(k, cfg.p, cfg.q, mode, options_from(cfg, cfg.u)));
  }

  if (cfg.format == "json") {
    if (cfg.all_units) return canonical_dump(unit_sweep_json(certs));
    if (cfg.through) return canonical_dump(series_json(certs));
    return canonical_dump(to_json(certs.front()));
  }
  std::ostringstream out;
  for (const auto& c : certs) out << summarize(c) << "\n";
  if (cfg.all_units) {
    const bool same = std::all_of(certs.begin(), certs.end(), [&](const auto& c) { return c.verdict == certs[0].verdict; });
    out << "verdict over all units u in F_" << cfg.p << "*: " << (same ? to_string(certs[0].verdict) : "VARIES") << "\n";
  }
  return out.str();
}

std::string independence_verb(const RunConfig& cfg) {
  if (cfg.family_path.empty()) throw PreconditionError("independence needs --family FILE");
  const auto family = family_from_json(read_json_file(cfg.family_path));
  const auto coeffs = parse_coefficients(cfg.coeffs.empty() ? std::string("1") : cfg.coeffs);
  const ModeSpec mode = ModeSpec::parse(cfg.mode, cfg.bound);
  const IndependenceCertificate cert = independence_certificate(family, coeffs, mode, cfg.q, options_from(cfg, cfg.u));
  if (cfg.format == "json") return canonical_dump(to_json(cert));
  std::ostringstream out;
  out << "family:";
  for (const auto& f : family) out << " (m=" << f.m << ", J=" << f.companion << ", p=" << f.p << ")";
  out << "\nprime preconditions: ok\n";
  out << "target summand " << cert.target + 1 << ", working at p=" << family[cert.target].p << "\n";
  for (const auto& r : cert.reduction) {
    out << "  summand " << r.index + 1 << " (m=" << r.m << "): cover homology " << r.homology << ", exponent of p "
        << r.p_exponent << " -> character is trivial there\n";
  }
  out << summarize(cert.sub);
  return out.str();
}

std::string verify_verb(const RunConfig& cfg, int& status) {
  if (cfg.cert_path.empty()) throw PreconditionError("verify needs --cert FILE");
  const std::string bytes = read_file(cfg.cert_path);
  json cert;
  try {
    cert = json::parse(bytes);
  } catch (const json::exception& e) {
    throw PreconditionError("malformed certificate: " + std::string(e.what()));
  }
  const VerifyReport report = verify_certificate(cert, bytes, cfg.jobs);
  status = report.ok ? kExitOk : kExitPrecondition;
  if (cfg.format == "json") {
    return canonical_dump({{"schema", "1"}, {"kind", "verify_report"}, {"ok", report.ok},
                           {"records_checked", s(std::uint64_t{report.records_checked})},
                           {"failures", report.failures}});
  }
  std::ostringstream out;
  out << (report.ok ? "OK" : "FAILED") << ": " << report.records_checked << " records re-derived\n";
  for (const auto& f : report.failures) out << "  " << f << "\n";
  return out.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("KNOTCERT_BUDGET")) {
    try {
      cfg.budget = std::stoull(env);
    } catch (const std::logic_error&) {
      err << "error: KNOTCERT_BUDGET='" << env << "' is not a number\n";
      return kExitPrecondition;
    }
  }

  CLI::App app{"Casson-Gordon obstruction certificates for amphicheiral knots"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "table or json")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--out", cfg.out_path, "write results to FILE");
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1U, 1024U));
  app.add_option("--budget", cfg.budget, "enumeration cap");
  app.add_option("--seed", cfg.seed, "seed for randomized square roots");

  auto* cover = app.add_subcommand("cover-homology", "homology of the q-fold cyclic branched cover");
  cover->add_option("--m", cfg.m, "twist parameter of K_{2m+1}");
  cover->add_option("--q", cfg.q, "cover degree (prime power)");
  cover->add_option("--knot", cfg.knot, "knot spec instead of --m");

  auto* sig = app.add_subcommand("signature", "Levine-Tristram signatures at c/p");
  sig->add_option("--knot,--J", cfg.knot, "knot spec (default trefoil)");
  sig->add_option("--p", cfg.p, "prime power denominator");
  sig->add_option("--c", cfg.c, "single numerator");

  auto* primes = app.add_subcommand("primes", "primes dividing F(m) = 3m^2 + 3m + 1 with exponent one");
  primes->add_option("--count", cfg.count, "how many");
  primes->add_option("--bound", cfg.bound_search, "search bound (on p, or on m with --family)");
  primes->add_flag("--family", cfg.family, "select an independent family (m_i, p_i) instead");

  auto* deck = app.add_subcommand("deck", "deck transformation eigenvalues mod p");
  deck->add_option("--m", cfg.m)->required();
  deck->add_option("--q", cfg.q);
  deck->add_option("--p", cfg.p)->required();

  auto* obstruct = app.add_subcommand("obstruct", "certify that n copies of K-bar_{J,2m+1} are not slice");
  obstruct->add_option("--m", cfg.m);
  obstruct->add_option("--J", cfg.companion, "companion knot spec");
  obstruct->add_option("--p", cfg.p);
  obstruct->add_option("--q", cfg.q);
  obstruct->add_option("--n", cfg.n, "number of copies")->check(CLI::PositiveNumber);
  obstruct->add_option("--mode", cfg.mode)->check(CLI::IsMember({"refined", "bounded", "both"}));
  obstruct->add_option("--C", cfg.bound, "bound on each unknown term (bounded mode)");
  obstruct->add_option("--u", cfg.u, "linking-form unit");
  obstruct->add_flag("--all-units", cfg.all_units, "repeat for every unit u in F_p*");
  obstruct->add_flag("--through", cfg.through, "certify every n' = 1..n");
  obstruct->add_option("--sum", cfg.sum_path, "satellite-sum JSON instead of --m/--J/--n");

  auto* indep = app.add_subcommand("independence", "certify a linear combination of a family is not slice");
  indep->add_option("--family", cfg.family_path, "family spec JSON")->required();
  indep->add_option("--coeffs", cfg.coeffs, "comma-separated integer coefficients");
  indep->add_option("--mode", cfg.mode)->check(CLI::IsMember({"refined", "bounded", "both"}));
  indep->add_option("--C", cfg.bound);
  indep->add_option("--q", cfg.q);
  indep->add_option("--u", cfg.u);

  auto* verify = app.add_subcommand("verify", "re-derive a certificate and compare bytes");
  verify->add_option("--cert", cfg.cert_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  int status = kExitOk;
  std::string result;
  try {
    if (cover->parsed()) result = cover_homology_verb(cfg);
    else if (sig->parsed()) result = signature_verb(cfg);
    else if (primes->parsed()) result = primes_verb(cfg);
    else if (deck->parsed()) result = deck_verb(cfg);
    else if (obstruct->parsed()) result = obstruct_verb(cfg);
    else if (indep->parsed()) result = independence_verb(cfg);
    else if (verify->parsed()) result = verify_verb(cfg, status);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise with --budget or KNOTCERT_BUDGET)\n";
    return kExitBudget;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  if (cfg.out_path.empty()) {
    out << result;
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << cfg.out_path << "\n";
      return kExitPrecondition;
    }
    file << result;
  }
  return status;
}

}  // namespace knotcert::cli
