#include "knotcert/obstruction.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <set>
#include <thread>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"
#include "knotcert/number_theory.hpp"

namespace knotcert {

namespace {

// "3", "-2", "3/2" or "1.25"
mpq_class parse_rational(const std::string& text) {
  std::string s = text;
  mpq_class q;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    if (q.set_str(digits + "/" + den, 10) != 0) throw PreconditionError("bad bound C '" + text + "'");
  } else if (q.set_str(s, 10) != 0) {
    throw PreconditionError("bad bound C '" + text + "'");
  }
  q.canonicalize();
  return q;
}

FpVector embed(const FpVector& small, const std::vector<std::size_t>& sites, std::size_t dim) {
  FpVector out(dim, 0);
  for (std::size_t i = 0; i < sites.size(); ++i) out[sites[i]] = small[i];
  return out;
}

std::size_t nonzero_count(const FpVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](auto x) { return x != 0; }));
}

}  // namespace

mpq_class ModeSpec::bound() const { return parse_rational(bound_text); }

std::string ModeSpec::name() const {
  switch (mode) {
    case Mode::Refined: return "refined";
    case Mode::Bounded: return "bounded";
    case Mode::Both: return "both";
  }
  return "?";
}

ModeSpec ModeSpec::parse(const std::string& mode, const std::string& bound) {
  ModeSpec spec;
  if (mode == "refined") {
    spec.mode = Mode::Refined;
  } else if (mode == "bounded") {
    spec.mode = Mode::Bounded;
  } else if (mode == "both") {
    spec.mode = Mode::Both;
  } else {
    throw PreconditionError("unknown mode '" + mode + "' (expected refined, bounded or both)");
  }
  spec.bound_text = bound;
  if (spec.bound() < 0) throw PreconditionError("bound C must be non-negative");
  return spec;
}

std::string to_string(Verdict v) { return v == Verdict::NonSlice ? "NONSLICE" : "INCONCLUSIVE"; }

BigInt metabolizer_count(const PTorsionModule& module) {
  const std::size_t d = module.eigenspace_sites(true).size();
  BigInt total = 0;
  for (std::size_t k = 0; k <= d; ++k) total += gaussian_binomial(d, k, module.p());
  return total;
}

std::vector<Metabolizer> enumerate_metabolizers(const PTorsionModule& module, std::uint64_t budget) {
  if (module.mu_plus() == module.mu_minus()) throw PreconditionError("deck eigenvalues coincide");
  const BigInt total = metabolizer_count(module);
  if (total > BigInt(std::to_string(budget))) {
    throw BudgetExceeded(total.get_str() + " metabolizers exceed the enumeration budget of " + std::to_string(budget));
  }
  const std::uint64_t p = module.p();
  const std::size_t dim = module.dimension();
  const auto plus_sites = module.eigenspace_sites(true);
  const Subspace minus_space = module.eigenspace(false);
  const std::size_t d = plus_sites.size();

  std::vector<Metabolizer> out;
  out.reserve(total.get_ui());
  for (std::size_t k = 0; k <= d; ++k) {
    SubspaceStream stream(d, k, p, budget);
    while (auto small = stream.next()) {
      std::vector<FpVector> rows;
      for (const auto& r : small->basis()) rows.push_back(embed(r, plus_sites, dim));
      Subspace a = Subspace::span(p, dim, rows);
      Subspace b = annihilator(a, module.linking_form()).intersect(minus_space);
      Subspace h = a + b;
      if (h.dim() * 2 != dim) throw std::logic_error("metabolizer has the wrong dimension");
      out.push_back({std::move(a), std::move(b), std::move(h)});
    }
  }
  return out;
}

std::vector<Subspace> brute_force_metabolizers(const PTorsionModule& module, std::uint64_t budget) {
  const std::size_t dim = module.dimension();
  const FpMatrix& form = module.linking_form();
  const FpMatrix deck = module.deck_matrix();
  std::vector<Subspace> out;
  SubspaceStream stream(dim, dim / 2, module.p(), budget);
  while (auto h = stream.next()) {
    bool isotropic = true;
    for (const auto& x : h->basis())
      for (const auto& y : h->basis())
        if (form.bilinear(x, y) != 0) isotropic = false;
    // isotropic and half-dimensional is the same as H = Ann(H) for a nonsingular form
    if (!isotropic) continue;
    if (h->image(deck) == *h) out.push_back(std::move(*h));
  }
  return out;
}

FpVector find_witness_vector(const Metabolizer& h, const PTorsionModule& module) {
  const std::uint64_t p = module.p();
  const FpMatrix& form = module.linking_form();
  FpVector best;
  std::size_t best_score = 0;
  for (const Subspace* part : {&h.plus_part, &h.minus_part}) {
    const auto& rows = part->basis();
    const std::size_t k = rows.size();
    if (k >= 63) throw BudgetExceeded("metabolizer part too large for witness search");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      FpVector v(module.dimension(), 0);
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::uint64_t{1} << i))
          for (std::size_t j = 0; j < v.size(); ++j) v[j] = modular::add_mod(v[j], rows[i][j], p);
      const std::size_t score = nonzero_count(form.apply(v));
      if (best.empty() || score > best_score || (score == best_score && v < best)) {
        best = std::move(v);
        best_score = score;
      }
    }
  }
  if (best.empty()) throw PreconditionError("the zero subspace has no witness vector");
  return best;
}

ObstructionCertificate certify_nonslice(const SatelliteSum& k, std::uint64_t p, unsigned q, const ModeSpec& mode,
                                        const CertifyOptions& options) {
  const PTorsionModule module = build_p_torsion(k.summand_specs(), q, p, options.u);
  const SignatureTables tables = signature_tables(k, p);
  const std::vector<Metabolizer> metabolizers = enumerate_metabolizers(module, options.budget);
  const std::size_t n = k.summands.size();
  const mpq_class limit = mpq_class(static_cast<long>(n)) * mode.bound();

  ObstructionCertificate cert;
  cert.knot = k;
  cert.p = p;
  cert.q = q;
  cert.u = module.unit();
  cert.mode = mode;
  cert.mu_plus = module.mu_plus();
  cert.mu_minus = module.mu_minus();
  for (const auto& l : module.labels()) cert.sites.push_back(l.to_string());
  cert.linking_form = module.linking_form();
  cert.metabolizer_count = metabolizer_count(module);
  cert.records.resize(metabolizers.size(), MetabolizerRecord{Subspace(p, 0)});

  auto evaluate = [&](std::size_t idx) {
    const Metabolizer& h = metabolizers[idx];
    MetabolizerRecord rec{h.whole};
    rec.plus_dim = h.plus_part.dim();
    rec.v = find_witness_vector(h, module);
    rec.chi = Character::linking_dual(module, rec.v);
    rec.sum = obstruction_sum(k, rec.chi, module, tables);
    rec.refined_violates = rec.sum.signature_total != 0;
    rec.bounded_violates = mpq_class(std::labs(rec.sum.signature_total)) > limit;
    cert.records[idx] = std::move(rec);
  };
  const unsigned jobs = std::max(1U, options.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < metabolizers.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < metabolizers.size(); i = next++) evaluate(i);
      });
  }

  for (const auto& [spec, table] : tables) {
    if (parse_knot_spec(spec).size() == 0) continue;
    for (std::uint64_t lambda : {module.mu_plus(), module.mu_minus()})
      for (std::uint64_t c = 1; c < p; ++c) {
        int mag = std::abs(cg_orbit(table, c, lambda, q, p).total);
        if (!cert.min_orbit_magnitude || mag < *cert.min_orbit_magnitude) cert.min_orbit_magnitude = mag;
      }
  }

  auto conclude = [&](bool MetabolizerRecord::*flag) {
    bool all = std::all_of(cert.records.begin(), cert.records.end(), [&](const auto& r) { return r.*flag; });
    return all ? Verdict::NonSlice : Verdict::Inconclusive;
  };
  if (mode.refined()) cert.refined_verdict = conclude(&MetabolizerRecord::refined_violates);
  if (mode.bounded()) cert.bounded_verdict = conclude(&MetabolizerRecord::bounded_violates);
  const bool nonslice = (!cert.refined_verdict || *cert.refined_verdict == Verdict::NonSlice) &&
                        (!cert.bounded_verdict || *cert.bounded_verdict == Verdict::NonSlice);
  cert.verdict = nonslice ? Verdict::NonSlice : Verdict::Inconclusive;
  return cert;
}

std::vector<ObstructionCertificate> certify_infinite_order(std::int64_t m, const std::string& companion,
                                                           std::uint64_t p, std::size_t max_n,
                                                           const ModeSpec& mode, unsigned q,
                                                           const CertifyOptions& options) {
  if (max_n == 0) throw PreconditionError("max_n must be at least 1");
  std::vector<ObstructionCertificate> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    out.push_back(certify_nonslice(SatelliteSum::amphicheiral(m, companion, n), p, q, mode, options));
  return out;
}

IndependenceCertificate independence_certificate(const std::vector<FamilyEntry>& family,
                                                 const std::vector<std::int64_t>& coefficients,
                                                 const ModeSpec& mode, unsigned q,
                                                 const CertifyOptions& options) {
  if (family.empty()) throw PreconditionError("family is empty");
  if (coefficients.size() != family.size()) {
    throw PreconditionError("got " + std::to_string(coefficients.size()) + " coefficients for a family of " +
                            std::to_string(family.size()));
  }
  std::vector<BigInt> a;
  for (const auto& f : family) {
    if (f.p == 2 || !modular::is_prime(f.p)) throw PreconditionError("family prime " + std::to_string(f.p) + " is not an odd prime");
    a.push_back(number_theory::order_parameter(BigInt(std::to_string(f.m)), q));
    const unsigned e = a.back() == 0 ? 0 : number_theory::exponent_of(BigInt(std::to_string(f.p)), a.back());
    if (e != 1) {
      throw PreconditionError("exponent != 1: p=" + std::to_string(f.p) + " divides (m+1)^q - m^q at m=" +
                              std::to_string(f.m) + " with exponent " + std::to_string(e));
    }
  }
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j) continue;
      if (family[i].p == family[j].p) throw PreconditionError("prime collision: p=" + std::to_string(family[i].p) + " repeats");
      if (a[j] % BigInt(std::to_string(family[i].p)) == 0) {
        throw PreconditionError("prime collision: p=" + std::to_string(family[i].p) + " divides a(m=" +
                                std::to_string(family[j].m) + ") = " + a[j].get_str());
      }
    }
  auto first = std::find_if(coefficients.begin(), coefficients.end(), [](auto c) { return c != 0; });
  if (first == coefficients.end()) throw PreconditionError("all coefficients are zero; the combination is trivially slice");

  IndependenceCertificate cert;
  cert.family = family;
  cert.coefficients = coefficients;
  cert.q = q;
  cert.target = static_cast<std::size_t>(first - coefficients.begin());
  const FamilyEntry& target = family[cert.target];
  const BigInt bp(std::to_string(target.p));
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (j == cert.target || coefficients[j] == 0) continue;
    const SatelliteSummand block{family[j].m, false, {}};
    const CoverHomology h = cover_homology(block.seifert_form(), q);
    ReductionStep step{j, family[j].m, a[j], number_theory::exponent_of(bp, h.order()), h.group_string()};
    if (step.p_exponent != 0) throw std::logic_error("summand has p-torsion despite coprimality");
    cert.reduction.push_back(std::move(step));
  }
  const std::int64_t c = coefficients[cert.target];
  const auto copies = static_cast<std::size_t>(c < 0 ? -c : c);
  cert.sub = certify_nonslice(SatelliteSum::amphicheiral(target.m, target.companion, copies, c < 0), target.p, q,
                              mode, options);
  cert.verdict = cert.sub.verdict;
  return cert;
}

}  // namespace knotcert
