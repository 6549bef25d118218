#include <algorithm>
#include <limits>
#include <set>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"
#include "knotcert/obstruction.hpp"

namespace knotcert {

using nlohmann::json;

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(std::int64_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }

json vec_json(const FpVector& v) {
  json out = json::array();
  for (auto x : v) out.push_back(str(x));
  return out;
}

json fp_matrix_json(const FpMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i)));
  return out;
}

json subspace_json(const Subspace& s) {
  json out = json::array();
  for (const auto& r : s.basis()) out.push_back(vec_json(r));
  return out;
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  if (!j.contains(key)) throw PreconditionError("certificate lacks field '" + key + "'");
  const json& v = j.at(key);
  try {
    if (v.is_string()) {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      unsigned long long x = std::stoull(s, &used);
      if (used == s.size() && s.front() != '-') return x;
    } else if (v.is_number_unsigned()) {
      return v.get<std::uint64_t>();
    }
  } catch (const std::logic_error&) {
  }
  throw PreconditionError("field '" + key + "' is not a non-negative integer");
}

std::int64_t parse_i64(const json& v, const std::string& what) {
  try {
    if (v.is_string()) {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      long long x = std::stoll(s, &used);
      if (used == s.size()) return x;
    } else if (v.is_number_integer()) {
      return v.get<std::int64_t>();
    }
  } catch (const std::logic_error&) {
  }
  throw PreconditionError("field '" + what + "' is not an integer");
}

FpVector parse_vec(const json& j, std::uint64_t p) {
  if (!j.is_array()) throw PreconditionError("expected an array of residues");
  FpVector out;
  for (const auto& e : j) {
    std::uint64_t x = std::stoull(e.get<std::string>());
    if (x >= p) throw PreconditionError("residue " + std::to_string(x) + " not reduced mod " + std::to_string(p));
    out.push_back(x);
  }
  return out;
}

json mode_fields(const ModeSpec& mode) {
  json out = {{"mode", mode.name()}};
  if (mode.bounded()) out["bound_C"] = mode.bound_text;
  return out;
}

ModeSpec parse_mode(const json& j) {
  return ModeSpec::parse(j.at("mode").get<std::string>(), j.value("bound_C", std::string("0")));
}

json caveats(const ModeSpec& mode) {
  json out = json::array();
  if (mode.refined())
    out.push_back("refined: each sigma(K-bar_{2m+1}, chi_i) is taken to be 0; that vanishing is assumed, not computed");
  if (mode.bounded())
    out.push_back("bounded: each |sigma(K-bar_{2m+1}, chi_i)| is assumed to be at most bound_C, which is an input");
  out.push_back("obstruction only: INCONCLUSIVE never asserts that a knot is slice");
  return out;
}

}  // namespace

namespace {

// Containers holding only scalars or scalar arrays stay on one line;
// everything else nests with one space of indent per level. Object keys are already sorted by json.
void emit(const json& j, int depth, std::string& out) {
  auto scalar_only = [](const json& c) {
    return std::all_of(c.begin(), c.end(), [](const json& e) { return !e.is_structured(); });
  };
  // flat: every child is a scalar or an array of scalars
  auto flat = [&](const json& c) {
    return std::all_of(c.begin(), c.end(),
                       [&](const json& e) { return !e.is_structured() || (e.is_array() && scalar_only(e)); });
  };
  if (!j.is_structured() || j.empty() || flat(j)) {
    out += j.dump(-1, ' ', false, json::error_handler_t::strict);
    return;
  }
  const std::string pad(static_cast<std::size_t>(depth + 1), ' ');
  out += j.is_array() ? "[\n" : "{\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (j.is_object()) out += json(it.key()).dump() + ": ";
    emit(*it, depth + 1, out);
  }
  out += "\n" + std::string(static_cast<std::size_t>(depth), ' ') + (j.is_array() ? "]" : "}");
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

json to_json(const ObstructionCertificate& c) {
  json records = json::array();
  for (const auto& r : c.records) {
    json contributions = json::array();
    for (const auto& s : r.sum.contributions) {
      json alphas = json::array(), sigs = json::array();
      for (auto a : s.orbit.alphas) alphas.push_back(str(a));
      for (auto g : s.orbit.signatures) sigs.push_back(str(g));
      contributions.push_back({{"site", c.sites.at(s.site)},
                               {"value", str(s.value)},
                               {"companion", s.companion},
                               {"alphas", alphas},
                               {"signatures", sigs},
                               {"delta", str(s.orbit.total)}});
    }
    json obstructed = json::object();
    if (c.mode.refined()) obstructed["refined"] = r.refined_violates;
    if (c.mode.bounded()) obstructed["bounded"] = r.bounded_violates;
    records.push_back({{"H", subspace_json(r.h)},
                       {"plus_dim", str(static_cast<std::uint64_t>(r.plus_dim))},
                       {"v", vec_json(r.v)},
                       {"character", vec_json(r.chi.values)},
                       {"contributions", contributions},
                       {"signature_total", str(r.sum.signature_total)},
                       {"unknown_terms", str(static_cast<std::uint64_t>(r.sum.unknown_terms))},
                       {"degenerate", r.sum.degenerate},
                       {"obstructed", obstructed}});
  }
  json verdicts = json::object();
  if (c.refined_verdict) verdicts["refined"] = to_string(*c.refined_verdict);
  if (c.bounded_verdict) verdicts["bounded"] = to_string(*c.bounded_verdict);
  json out = {{"schema", str(kSchemaVersion)},
              {"kind", "nonslice"},
              {"knot", to_json(c.knot)},
              {"p", str(c.p)},
              {"q", str(static_cast<std::uint64_t>(c.q))},
              {"u", str(c.u)},
              {"eigenvalues", {{"plus", str(c.mu_plus)}, {"minus", str(c.mu_minus)}}},
              {"sites", c.sites},
              {"linking_form", fp_matrix_json(c.linking_form)},
              {"metabolizer_count", c.metabolizer_count.get_str()},
              {"records", records},
              {"verdicts", verdicts},
              {"verdict", to_string(c.verdict)},
              {"caveats", caveats(c.mode)}};
  out.update(mode_fields(c.mode));
  if (c.min_orbit_magnitude) out["min_orbit_magnitude"] = str(*c.min_orbit_magnitude);
  return out;
}

json to_json(const std::vector<FamilyEntry>& family) {
  json out = json::array();
  for (const auto& f : family) out.push_back({{"m", str(f.m)}, {"J", f.companion}, {"p", str(f.p)}});
  return out;
}

std::vector<FamilyEntry> family_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("family") ? j.at("family") : j;
  if (!arr.is_array()) throw PreconditionError("family spec must be an array or {\"family\": [...]}");
  std::vector<FamilyEntry> out;
  for (const auto& e : arr) {
    if (!e.is_object() || !e.contains("m") || !e.contains("p"))
      throw PreconditionError("family entries need 'm' and 'p'");
    FamilyEntry f;
    f.m = parse_i64(e.at("m"), "m");
    const std::int64_t p = parse_i64(e.at("p"), "p");
    if (p <= 0) throw PreconditionError("family prime must be positive");
    f.p = static_cast<std::uint64_t>(p);
    f.companion = canonical_knot_spec(e.value("J", std::string("trefoil")));
    parse_knot_spec(f.companion);
    out.push_back(std::move(f));
  }
  return out;
}

json to_json(const IndependenceCertificate& c) {
  json coeffs = json::array();
  for (auto x : c.coefficients) coeffs.push_back(str(x));
  json reduction = json::array();
  for (const auto& r : c.reduction) {
    reduction.push_back({{"index", str(static_cast<std::uint64_t>(r.index + 1))},
                         {"m", str(r.m)},
                         {"a", r.a.get_str()},
                         {"cover_homology", r.homology},
                         {"p_exponent", str(static_cast<std::uint64_t>(r.p_exponent))}});
  }
  json out = {{"schema", str(kSchemaVersion)},
              {"kind", "independence"},
              {"family", to_json(c.family)},
              {"coefficients", coeffs},
              {"q", str(static_cast<std::uint64_t>(c.q))},
              {"target", str(static_cast<std::uint64_t>(c.target + 1))},
              {"p", str(c.family.at(c.target).p)},
              {"reduction", reduction},
              {"certificate", to_json(c.sub)},
              {"verdict", to_string(c.verdict)}};
  out.update(mode_fields(c.sub.mode));
  return out;
}

json unit_sweep_json(const std::vector<ObstructionCertificate>& certs) {
  json list = json::array();
  json by_unit = json::object();
  std::set<std::string> verdicts;
  for (const auto& c : certs) {
    list.push_back(to_json(c));
    by_unit[str(c.u)] = to_string(c.verdict);
    verdicts.insert(to_string(c.verdict));
  }
  return {{"schema", str(kSchemaVersion)},
          {"kind", "unit_sweep"},
          {"certificates", list},
          {"verdicts_by_unit", by_unit},
          {"verdict_invariant", verdicts.size() <= 1}};
}

json series_json(const std::vector<ObstructionCertificate>& certs) {
  json list = json::array();
  for (const auto& c : certs) list.push_back(to_json(c));
  return {{"schema", str(kSchemaVersion)}, {"kind", "series"}, {"certificates", list}};
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Inputs {
  SatelliteSum knot;
  std::uint64_t p;
  unsigned q;
  std::uint64_t u;
  ModeSpec mode;
};

Inputs read_inputs(const json& c) {
  return {satellite_from_json(c.at("knot")), get_u64(c, "p"), static_cast<unsigned>(get_u64(c, "q")), get_u64(c, "u"),
          parse_mode(c)};
}

// Checks every record from the stored data alone: H is a deck-invariant
// self-annihilating half-dimensional subspace, v lies in H, the character is
// linking with v, and the signature bookkeeping adds up.
void check_records(const json& c, VerifyReport& report, const std::string& where) {
  auto fail = [&](const std::string& msg) {
    report.ok = false;
    report.failures.push_back(where + msg);
  };
  const Inputs in = read_inputs(c);
  const PTorsionModule module = build_p_torsion(in.knot.summand_specs(), in.q, in.p, in.u);
  const SignatureTables tables = signature_tables(in.knot, in.p);
  const std::uint64_t p = in.p;
  const std::size_t dim = module.dimension();
  const FpMatrix& form = module.linking_form();
  const FpMatrix deck = module.deck_matrix();
  const Subspace plus_space = module.eigenspace(true);
  const std::size_t n = in.knot.summands.size();
  const mpq_class limit = mpq_class(static_cast<long>(n)) * in.mode.bound();

  if (c.at("linking_form") != fp_matrix_json(form)) fail("linking form does not match the knot");
  if (get_u64(c.at("eigenvalues"), "plus") != module.mu_plus() ||
      get_u64(c.at("eigenvalues"), "minus") != module.mu_minus())
    fail("deck eigenvalues do not match the knot");

  const json& records = c.at("records");
  const BigInt expected = metabolizer_count(module);
  if (c.at("metabolizer_count").get<std::string>() != expected.get_str() || BigInt(records.size()) != expected)
    fail("record count does not equal the number of metabolizers " + expected.get_str());

  std::set<std::string> seen;
  bool all_refined = true, all_bounded = true;
  for (std::size_t idx = 0; idx < records.size(); ++idx) {
    const json& r = records[idx];
    const std::string tag = "record " + std::to_string(idx + 1) + ": ";
    std::vector<FpVector> rows;
    for (const auto& row : r.at("H")) rows.push_back(parse_vec(row, p));
    for (const auto& row : rows)
      if (row.size() != dim) fail(tag + "basis vector has the wrong length");
    const Subspace h = Subspace::span(p, dim, rows);
    if (h.basis() != rows) fail(tag + "H basis is not in canonical form");
    if (h.dim() * 2 != dim) fail(tag + "H is not half-dimensional");
    for (const auto& x : h.basis())
      for (const auto& y : h.basis())
        if (form.bilinear(x, y) != 0) fail(tag + "H is not self-annihilating");
    if (!(h.image(deck) == h)) fail(tag + "H is not deck-invariant");
    if (!seen.insert(h.key()).second) fail(tag + "duplicate metabolizer");
    if (get_u64(r, "plus_dim") != h.intersect(plus_space).dim()) fail(tag + "plus_dim is wrong");

    const FpVector v = parse_vec(r.at("v"), p);
    if (v.size() != dim || !h.contains(v) || std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }))
      fail(tag + "witness v is not a nonzero vector of H");
    const Character chi = Character::linking_dual(module, v);
    if (parse_vec(r.at("character"), p) != chi.values) fail(tag + "character values do not match lk(., v)");
    for (const auto& x : h.basis())
      if (chi(x) != 0) fail(tag + "character does not vanish on H");

    const ObstructionSum sum = obstruction_sum(in.knot, chi, module, tables);
    const json& contributions = r.at("contributions");
    if (contributions.size() != sum.contributions.size()) {
      fail(tag + "contribution list has the wrong length");
    } else {
      for (std::size_t k = 0; k < sum.contributions.size(); ++k) {
        const auto& s = sum.contributions[k];
        const json& js = contributions[k];
        json alphas = json::array(), sigs = json::array();
        for (auto a : s.orbit.alphas) alphas.push_back(str(a));
        for (auto g : s.orbit.signatures) sigs.push_back(str(g));
        if (js.at("site") != module.labels()[s.site].to_string() || js.at("value") != str(s.value) ||
            js.at("companion") != s.companion || js.at("alphas") != alphas || js.at("signatures") != sigs ||
            js.at("delta") != str(s.orbit.total))
          fail(tag + "contribution at " + module.labels()[s.site].to_string() + " does not recompute");
      }
    }
    if (r.at("signature_total") != str(sum.signature_total)) fail(tag + "signature total does not recompute");
    if (get_u64(r, "unknown_terms") != n) fail(tag + "unknown term count is wrong");
    const bool refined = sum.signature_total != 0;
    const bool bounded = mpq_class(std::labs(sum.signature_total)) > limit;
    const json& ob = r.at("obstructed");
    if (in.mode.refined() && ob.at("refined") != refined) fail(tag + "refined flag is wrong");
    if (in.mode.bounded() && ob.at("bounded") != bounded) fail(tag + "bounded flag is wrong");
    all_refined = all_refined && refined;
    all_bounded = all_bounded && bounded;
    ++report.records_checked;
  }
  const json& verdicts = c.at("verdicts");
  if (in.mode.refined() &&
      verdicts.at("refined") != to_string(all_refined ? Verdict::NonSlice : Verdict::Inconclusive))
    fail("refined verdict does not follow from the records");
  if (in.mode.bounded() &&
      verdicts.at("bounded") != to_string(all_bounded ? Verdict::NonSlice : Verdict::Inconclusive))
    fail("bounded verdict does not follow from the records");
  const bool nonslice = (!in.mode.refined() || all_refined) && (!in.mode.bounded() || all_bounded);
  if (c.at("verdict") != to_string(nonslice ? Verdict::NonSlice : Verdict::Inconclusive))
    fail("overall verdict does not follow from the records");
}

ObstructionCertificate regenerate(const json& c, unsigned jobs) {
  const Inputs in = read_inputs(c);
  CertifyOptions options;
  options.u = in.u;
  options.jobs = jobs;
  options.budget = std::numeric_limits<std::uint64_t>::max();
  return certify_nonslice(in.knot, in.p, in.q, in.mode, options);
}

}  // namespace

VerifyReport verify_certificate(const json& cert, const std::string& original_bytes, unsigned jobs) {
  VerifyReport report;
  auto fail = [&](const std::string& msg) {
    report.ok = false;
    report.failures.push_back(msg);
  };
  try {
    if (cert.value("schema", std::string()) != str(kSchemaVersion)) {
      fail("unsupported schema version");
      return report;
    }
    const std::string kind = cert.value("kind", std::string());
    json regenerated;
    if (kind == "nonslice") {
      check_records(cert, report, "");
      regenerated = to_json(regenerate(cert, jobs));
    } else if (kind == "unit_sweep" || kind == "series") {
      std::vector<ObstructionCertificate> certs;
      const json& list = cert.at("certificates");
      for (std::size_t i = 0; i < list.size(); ++i) {
        check_records(list[i], report, "certificate " + std::to_string(i + 1) + ": ");
        certs.push_back(regenerate(list[i], jobs));
      }
      regenerated = kind == "unit_sweep" ? unit_sweep_json(certs) : series_json(certs);
    } else if (kind == "independence") {
      check_records(cert.at("certificate"), report, "sub-certificate: ");
      std::vector<std::int64_t> coeffs;
      for (const auto& x : cert.at("coefficients")) coeffs.push_back(parse_i64(x, "coefficients"));
      CertifyOptions options;
      options.u = get_u64(cert.at("certificate"), "u");
      options.jobs = jobs;
      options.budget = std::numeric_limits<std::uint64_t>::max();
      regenerated = to_json(independence_certificate(family_from_json(cert.at("family")), coeffs, parse_mode(cert),
                                                     static_cast<unsigned>(get_u64(cert, "q")), options));
    } else {
      fail("unknown certificate kind '" + kind + "'");
      return report;
    }
    if (regenerated != cert) fail("regenerated certificate differs from the stored one");
    if (!original_bytes.empty() && canonical_dump(regenerated) != original_bytes)
      fail("regenerated certificate bytes differ from the file");
  } catch (const std::exception& e) {
    fail(std::string("certificate could not be checked: ") + e.what());
  }
  return report;
}

}  // namespace knotcert
