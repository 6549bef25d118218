#include "knotcert/branched_cover.hpp"

#include <algorithm>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"
#include "knotcert/number_theory.hpp"

namespace knotcert {

namespace {

void require_prime_power(unsigned q) {
  if (q < 2 || !modular::is_prime_power(q))
    throw PreconditionError("cover degree q=" + std::to_string(q) + " is not a prime power");
}

BigInt big(std::int64_t v) { return BigInt(std::to_string(v)); }

}  // namespace

IntMatrix presentation_matrix(const SeifertMatrix& v, unsigned q) {
  require_prime_power(q);
  const IntMatrix& vm = v.matrix();
  const IntMatrix gamma = vm * (vm - vm.transpose()).unimodular_inverse();
  const IntMatrix shifted = gamma - IntMatrix::identity(gamma.rows());
  return gamma.pow(q) - shifted.pow(q);
}

BigInt CoverHomology::order() const {
  BigInt n = 1;
  for (const auto& d : invariant_factors) n *= d;
  return n;
}

std::string CoverHomology::group_string(const std::string& plus) const {
  if (invariant_factors.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    if (i) s += plus;
    s += invariant_factors[i] == 0 ? std::string("Z") : "Z_" + invariant_factors[i].get_str();
  }
  return s;
}

CoverHomology cover_homology(const SeifertMatrix& v, unsigned q) {
  SmithForm snf = smith_normal_form(presentation_matrix(v, q));
  CoverHomology h;
  h.q = q;
  h.diagonal = snf.diagonal;
  for (const auto& d : snf.diagonal)
    if (d != 1) h.invariant_factors.push_back(d);
  return h;
}

CoverHomology twisted_cover_homology(std::int64_t m, unsigned q) {
  CoverHomology h = cover_homology(SeifertMatrix::twisted(m), q);
  BigInt a = number_theory::order_parameter(big(m), q);
  if (h.diagonal != std::vector<BigInt>{a, a}) {
    throw std::logic_error("cover of K_{2m+1} at m=" + std::to_string(m) + " is not Z_a + Z_a with a=" + a.get_str());
  }
  h.a = a;
  return h;
}

DeckAction deck_action(std::int64_t m, unsigned q, std::uint64_t p) {
  require_prime_power(q);
  if (p == 2 || !modular::is_prime(p)) throw PreconditionError("p=" + std::to_string(p) + " is not an odd prime");
  const BigInt a = number_theory::order_parameter(big(m), q);
  if (a % BigInt(std::to_string(p)) != 0) {
    std::string msg = "p=" + std::to_string(p) + " does not divide (m+1)^q - m^q = " + a.get_str();
    if (q == 3 && p % 3 == 2) msg += "; p is 2 mod 3, so it never divides F(m) = 3m^2 + 3m + 1";
    throw PreconditionError(msg);
  }
  const std::uint64_t mr = modular::reduce(m, p);
  const std::uint64_t m1 = modular::reduce(m + 1, p);
  DeckAction d{m, q, p, modular::mul_mod(modular::inv_mod(mr, p), m1, p),
               modular::mul_mod(modular::inv_mod(m1, p), mr, p)};
  if (d.lambda_plus == d.lambda_minus) {
    throw PreconditionError("eigenvalue collision: lambda_+ = lambda_- = " + std::to_string(d.lambda_plus) +
                            " mod " + std::to_string(p));
  }
  return d;
}

std::string to_string(Lift lift) {
  switch (lift) {
    case Lift::L1: return "L1";
    case Lift::L2: return "L2";
    case Lift::L1p: return "L1'";
    case Lift::L2p: return "L2'";
  }
  return "?";
}

Lift lift_from_string(const std::string& s) {
  for (Lift l : kLifts)
    if (to_string(l) == s) return l;
  throw PreconditionError("unknown lift label '" + s + "' (expected L1, L2, L1' or L2')");
}

std::string SiteLabel::to_string() const { return std::to_string(summand + 1) + ":" + knotcert::to_string(lift); }

FpMatrix PTorsionModule::deck_matrix() const {
  FpMatrix t(p_, dimension(), dimension());
  for (std::size_t i = 0; i < dimension(); ++i) t.set(i, i, eigen_[i]);
  return t;
}

std::vector<std::size_t> PTorsionModule::eigenspace_sites(bool plus) const {
  std::vector<std::size_t> out;
  const std::uint64_t target = plus ? mu_plus_ : mu_minus_;
  for (std::size_t i = 0; i < eigen_.size(); ++i)
    if (eigen_[i] == target) out.push_back(i);
  return out;
}

Subspace PTorsionModule::eigenspace(bool plus) const {
  std::vector<FpVector> vectors;
  for (auto i : eigenspace_sites(plus)) {
    FpVector e(dimension(), 0);
    e[i] = 1;
    vectors.push_back(std::move(e));
  }
  return Subspace::span(p_, dimension(), vectors);
}

PTorsionModule build_p_torsion(std::span<const SummandSpec> summands, unsigned q, std::uint64_t p, std::uint64_t u) {
  if (summands.empty()) throw PreconditionError("p-torsion module needs at least one summand");
  PTorsionModule mod(p, q, u % p);
  if (mod.u_ == 0) throw PreconditionError("linking unit u must be nonzero mod p");
  const BigInt bp(std::to_string(p));
  const std::size_t dim = 4 * summands.size();
  mod.form_ = FpMatrix(p, dim, dim);
  for (std::size_t s = 0; s < summands.size(); ++s) {
    const SummandSpec& spec = summands[s];
    if (spec.sign != 1 && spec.sign != -1) throw PreconditionError("summand sign must be +1 or -1");
    const DeckAction d = deck_action(spec.m, q, p);
    const unsigned e = number_theory::exponent_of(bp, number_theory::order_parameter(big(spec.m), q));
    if (e != 1) {
      throw PreconditionError("exponent != 1: p=" + std::to_string(p) + " divides (m+1)^q - m^q at m=" +
                              std::to_string(spec.m) + " with exponent " + std::to_string(e));
    }
    if (s == 0) {
      mod.mu_plus_ = d.lambda_plus;
      mod.mu_minus_ = d.lambda_minus;
    } else if (!((d.lambda_plus == mod.mu_plus_ && d.lambda_minus == mod.mu_minus_) ||
                 (d.lambda_plus == mod.mu_minus_ && d.lambda_minus == mod.mu_plus_))) {
      throw PreconditionError("deck eigenvalues of summand m=" + std::to_string(spec.m) +
                              " do not match the rest of the sum");
    }
    mod.summands_.push_back(spec);
    for (Lift l : kLifts) mod.labels_.push_back({s, l});
    mod.eigen_.insert(mod.eigen_.end(), {d.lambda_plus, d.lambda_minus, d.lambda_minus, d.lambda_plus});
    const std::size_t base = 4 * s;
    const std::uint64_t uk = spec.sign == 1 ? mod.u_ : p - mod.u_;
    const std::uint64_t ukp = p - uk;  // mirror negates linking
    mod.form_.set(base + 0, base + 1, uk);
    mod.form_.set(base + 1, base + 0, uk);
    mod.form_.set(base + 2, base + 3, ukp);
    mod.form_.set(base + 3, base + 2, ukp);
  }
  return mod;
}

}  // namespace knotcert
