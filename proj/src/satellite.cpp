#include "knotcert/satellite.hpp"

#include <algorithm>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"

namespace knotcert {

Companion Companion::parse(const std::string& spec) {
  std::string canon = canonical_knot_spec(spec);
  return {canon, parse_knot_spec(canon)};
}

Companion Companion::inverse() const { return {negate_knot_spec(spec), matrix.concordance_inverse()}; }

SeifertMatrix SatelliteSummand::seifert_form() const {
  const SeifertMatrix k = SeifertMatrix::twisted(m);
  const SeifertMatrix block = connected_sum(k, k.mirror());
  return mirrored ? block.concordance_inverse() : block;
}

SatelliteSum SatelliteSum::amphicheiral(std::int64_t m, const std::string& companion_spec, std::size_t copies,
                                        bool mirrored) {
  if (copies == 0) throw PreconditionError("need at least one copy");
  Companion j = Companion::parse(companion_spec);
  if (mirrored) j = j.inverse();
  const Companion minus_j = j.inverse();
  SatelliteSum sum;
  for (std::size_t i = 0; i < copies; ++i) sum.summands.push_back({m, mirrored, {j, minus_j, minus_j, j}});
  return sum;
}

std::vector<SummandSpec> SatelliteSum::summand_specs() const {
  std::vector<SummandSpec> out;
  for (const auto& s : summands) out.push_back({s.m, s.mirrored ? -1 : 1});
  return out;
}

SeifertMatrix SatelliteSum::seifert_form() const {
  SeifertMatrix total;
  for (const auto& s : summands) total = connected_sum(total, s.seifert_form());
  return total;
}

nlohmann::json to_json(const SatelliteSum& k) {
  nlohmann::json summands = nlohmann::json::array();
  for (const auto& s : k.summands) {
    nlohmann::json companions = nlohmann::json::object();
    for (Lift l : kLifts) companions[to_string(l)] = s.companion(l).spec;
    summands.push_back({{"m", std::to_string(s.m)}, {"mirrored", s.mirrored}, {"companions", companions}});
  }
  return {{"summands", summands}};
}

namespace {

std::int64_t json_int(const nlohmann::json& j, const char* what) {
  try {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
      std::size_t used = 0;
      const std::string s = j.get<std::string>();
      long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    }
  } catch (const std::logic_error&) {
  }
  throw PreconditionError(std::string("field '") + what + "' must be an integer");
}

}  // namespace

SatelliteSum satellite_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("summands") || !j["summands"].is_array())
    throw PreconditionError("satellite sum JSON needs a 'summands' array");
  SatelliteSum sum;
  for (const auto& s : j["summands"]) {
    if (!s.is_object() || !s.contains("m")) throw PreconditionError("each summand needs an 'm'");
    SatelliteSummand out;
    out.m = json_int(s["m"], "m");
    out.mirrored = s.value("mirrored", false);
    for (auto& c : out.companions) c = Companion::parse("unknot");
    if (s.contains("companions")) {
      if (!s["companions"].is_object()) throw PreconditionError("'companions' must be an object");
      for (const auto& [label, value] : s["companions"].items()) {
        Lift l = lift_from_string(label);
        std::string spec = value.is_string() ? value.get<std::string>() : value.dump();
        out.companions[static_cast<std::size_t>(l)] = Companion::parse(spec);
      }
    }
    sum.summands.push_back(std::move(out));
  }
  if (sum.summands.empty()) throw PreconditionError("satellite sum has no summands");
  return sum;
}

// ---------------------------------------------------------------------------

Character Character::linking_dual(const PTorsionModule& module, std::span<const std::uint64_t> v) {
  // form is symmetric, so lk(e_i, v) = (form v)_i
  return {module.p(), module.linking_form().apply(v)};
}

std::uint64_t Character::operator()(std::span<const std::uint64_t> x) const {
  if (x.size() != values.size()) throw PreconditionError("character applied to a vector of the wrong length");
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s = modular::add_mod(s, modular::mul_mod(values[i], x[i], p), p);
  return s;
}

bool Character::is_trivial() const {
  return std::all_of(values.begin(), values.end(), [](auto x) { return x == 0; });
}

SignatureTable::SignatureTable(const SeifertMatrix& k, std::uint64_t p) {
  values_.reserve(p);
  for (std::uint64_t c = 0; c < p; ++c)
    values_.push_back(tristram_levine_signature(k, static_cast<std::int64_t>(c), static_cast<std::int64_t>(p)));
}

OrbitSum cg_orbit(const SignatureTable& j, std::uint64_t c, std::uint64_t lambda, unsigned q, std::uint64_t p) {
  if (modular::pow_mod(lambda, q, p) != 1)
    throw PreconditionError("lambda=" + std::to_string(lambda) + " is not a q-th root of unity mod " + std::to_string(p));
  OrbitSum out;
  std::uint64_t alpha = c % p;
  for (unsigned k = 0; k < q; ++k) {
    out.alphas.push_back(alpha);
    out.signatures.push_back(j(alpha));
    out.total += j(alpha);
    out.degenerate = out.degenerate || j.degenerate(alpha);
    alpha = modular::mul_mod(alpha, lambda, p);
  }
  return out;
}

int cg_delta(const SeifertMatrix& j, std::uint64_t c, std::uint64_t lambda, unsigned q, std::uint64_t p) {
  return cg_orbit(SignatureTable(j, p), c, lambda, q, p).total;
}

SignatureTables signature_tables(const SatelliteSum& k, std::uint64_t p) {
  SignatureTables tables;
  for (const auto& s : k.summands)
    for (const auto& c : s.companions)
      if (!tables.contains(c.spec)) tables.emplace(c.spec, SignatureTable(c.matrix, p));
  return tables;
}

ObstructionSum obstruction_sum(const SatelliteSum& k, const Character& chi, const PTorsionModule& module,
                               const SignatureTables& tables) {
  if (module.summand_count() != k.summands.size() || chi.values.size() != module.dimension() ||
      chi.p != module.p()) {
    throw PreconditionError("character, module and satellite sum have mismatched basis labels");
  }
  const auto specs = k.summand_specs();
  for (std::size_t s = 0; s < specs.size(); ++s)
    if (specs[s].m != module.summands()[s].m || specs[s].sign != module.summands()[s].sign)
      throw PreconditionError("module summand " + std::to_string(s + 1) + " does not match the satellite sum");

  ObstructionSum out;
  out.unknown_terms = k.summands.size();
  for (std::size_t i = 0; i < module.dimension(); ++i) {
    const std::uint64_t value = chi.values[i];
    if (value == 0) continue;
    const SiteLabel& label = module.labels()[i];
    const Companion& comp = k.summands[label.summand].companion(label.lift);
    auto table = tables.find(comp.spec);
    if (table == tables.end()) throw std::logic_error("missing signature table for " + comp.spec);
    OrbitSum orbit = cg_orbit(table->second, value, module.deck_eigenvalues()[i], module.q(), module.p());
    out.signature_total += orbit.total;
    out.degenerate = out.degenerate || orbit.degenerate;
    out.contributions.push_back({i, value, comp.spec, std::move(orbit)});
  }
  return out;
}

ObstructionSum obstruction_sum(const SatelliteSum& k, const Character& chi, const PTorsionModule& module) {
  return obstruction_sum(k, chi, module, signature_tables(k, module.p()));
}

}  // namespace knotcert
