#include "knotcert/seifert.hpp"

#include <fstream>
#include <sstream>

#include "knotcert/errors.hpp"

namespace knotcert {

BigInt Polynomial::operator()(const BigInt& t) const {
  BigInt acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return {};
  Polynomial c;
  c.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  while (c.coeffs.size() > 1 && c.coeffs.back() == 0) c.coeffs.pop_back();
  return c;
}

bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs == b.coeffs; }

std::string Polynomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    const BigInt& c = coeffs[k];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || k == 0) out << mag.get_str();
    if (k >= 1) out << 't';
    if (k >= 2) out << '^' << k;
    first = false;
  }
  if (first) out << '0';
  return out.str();
}

// ---------------------------------------------------------------------------

SeifertMatrix::SeifertMatrix(IntMatrix v) : v_(std::move(v)) {
  if (!v_.is_square()) throw PreconditionError("Seifert matrix must be square");
  if (v_.rows() % 2 != 0) throw PreconditionError("Seifert matrix must have even size");
  BigInt det = (v_ - v_.transpose()).determinant();
  if (abs(det) != 1) {
    throw PreconditionError("V - V^T has determinant " + det.get_str() + ", not +-1");
  }
}

SeifertMatrix SeifertMatrix::trefoil() { return SeifertMatrix(IntMatrix::from_rows({{-1, 1}, {0, -1}})); }

SeifertMatrix SeifertMatrix::figure_eight() { return SeifertMatrix(IntMatrix::from_rows({{1, 1}, {0, -1}})); }

SeifertMatrix SeifertMatrix::twisted(std::int64_t m) {
  BigInt bm(std::to_string(m));
  return SeifertMatrix(IntMatrix::from_rows({{0, bm + 1}, {bm, 0}}));
}

SeifertMatrix SeifertMatrix::mirror() const { return SeifertMatrix(-v_.transpose()); }
SeifertMatrix SeifertMatrix::reverse() const { return SeifertMatrix(v_.transpose()); }
SeifertMatrix SeifertMatrix::concordance_inverse() const { return SeifertMatrix(-v_); }

SeifertMatrix connected_sum(const SeifertMatrix& a, const SeifertMatrix& b) {
  return SeifertMatrix(IntMatrix::direct_sum(a.matrix(), b.matrix()));
}

Polynomial alexander_polynomial(const SeifertMatrix& k) {
  const IntMatrix& v = k.matrix();
  const IntMatrix vt = v.transpose();
  const std::size_t n = v.rows();
  // det(V - t V^T) has degree <= n: sample at t = 0..n and interpolate.
  std::vector<BigInt> samples;
  for (std::size_t t = 0; t <= n; ++t) samples.push_back((v - vt * BigInt(static_cast<unsigned long>(t))).determinant());
  // Newton divided differences over Q, then expand to monomial basis.
  std::vector<mpq_class> dd(samples.begin(), samples.end());
  for (std::size_t level = 1; level <= n; ++level)
    for (std::size_t i = n; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / mpq_class(static_cast<long>(level));
      if (i == level) break;
    }
  std::vector<mpq_class> poly(n + 1, 0);
  for (std::size_t i = n + 1; i-- > 0;) {
    // poly = poly * (t - i) + dd[i]
    std::vector<mpq_class> next(n + 1, 0);
    for (std::size_t d = 0; d < n; ++d) next[d + 1] += poly[d];
    for (std::size_t d = 0; d <= n; ++d) next[d] -= poly[d] * static_cast<long>(i);
    next[0] += dd[i];
    poly = std::move(next);
  }
  Polynomial out;
  for (auto& c : poly) {
    c.canonicalize();
    if (c.get_den() != 1) throw std::logic_error("non-integral Alexander coefficient");
    out.coeffs.push_back(c.get_num());
  }
  while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

std::string canonical_knot_spec(const std::string& raw) {
  std::string s = strip(raw);
  bool negated = false;
  bool mirrored = false;
  for (;;) {
    if (!s.empty() && s.front() == '-') {
      negated = !negated;
      s = strip(s.substr(1));
    } else if (s.rfind("mirror:", 0) == 0) {
      mirrored = !mirrored;
      s = strip(s.substr(7));
    } else {
      break;
    }
  }
  if (s.empty()) throw PreconditionError("empty knot spec");
  std::string out = s;
  if (mirrored) out = "mirror:" + out;
  if (negated) out = "-" + out;
  return out;
}

std::string negate_knot_spec(const std::string& spec) { return canonical_knot_spec("-" + spec); }

SeifertMatrix parse_knot_spec(const std::string& raw) {
  std::string s = strip(raw);
  if (!s.empty() && s.front() == '-') return parse_knot_spec(s.substr(1)).concordance_inverse();
  if (s.rfind("mirror:", 0) == 0) return parse_knot_spec(s.substr(7)).mirror();
  if (s == "unknot") return SeifertMatrix::unknot();
  if (s == "trefoil") return SeifertMatrix::trefoil();
  if (s == "figure8") return SeifertMatrix::figure_eight();
  if (s.rfind("twisted:", 0) == 0) {
    try {
      std::size_t used = 0;
      long long m = std::stoll(s.substr(8), &used);
      if (used != s.size() - 8) throw std::invalid_argument(s);
      return SeifertMatrix::twisted(m);
    } catch (const std::logic_error&) {
      throw PreconditionError("bad twisted knot spec '" + s + "', expected twisted:INT");
    }
  }
  if (!s.empty() && s.front() == '@') {
    std::ifstream in(s.substr(1));
    if (!in) throw PreconditionError("cannot open Seifert matrix file " + s.substr(1));
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError("malformed JSON in " + s.substr(1) + ": " + e.what());
    }
    return seifert_from_json(j);
  }
  if (!s.empty() && s.front() == '[') {
    try {
      return seifert_from_json(nlohmann::json::parse(s));
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError("malformed inline matrix: " + std::string(e.what()));
    }
  }
  throw PreconditionError("unknown knot spec '" + s + "' (expected unknot, trefoil, figure8, twisted:M or @file.json)");
}

nlohmann::json to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix int_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw PreconditionError("matrix JSON must be an array of rows");
  std::vector<std::vector<BigInt>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw PreconditionError("matrix JSON row must be an array");
    std::vector<BigInt> r;
    for (const auto& e : row) {
      if (e.is_number_integer()) {
        r.emplace_back(std::to_string(e.get<long long>()));
      } else if (e.is_string()) {
        BigInt v;
        if (v.set_str(e.get<std::string>(), 10) != 0) throw PreconditionError("bad integer " + e.get<std::string>());
        r.push_back(v);
      } else {
        throw PreconditionError("matrix entries must be integers");
      }
    }
    rows.push_back(std::move(r));
  }
  return IntMatrix::from_rows(rows);
}

nlohmann::json to_json(const SeifertMatrix& k) { return to_json(k.matrix()); }

SeifertMatrix seifert_from_json(const nlohmann::json& j) { return SeifertMatrix(int_matrix_from_json(j)); }

}  // namespace knotcert
