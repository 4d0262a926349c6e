#include "gridfloer/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace gridfloer {

const char* errName(Err e) {
  switch (e) {
    case Err::NotAPermutation: return "NotAPermutation";
    case Err::CellCollision: return "CellCollision";
    case Err::TraceFailure: return "TraceFailure";
    case Err::TooSmall: return "TooSmall";
    case Err::TooLarge: return "TooLarge";
    case Err::NotADomain: return "NotADomain";
    case Err::NotDivisible: return "NotDivisible";
    case Err::GradingMismatch: return "GradingMismatch";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::SameIndex: return "SameIndex";
    case Err::ComponentTooSmall: return "ComponentTooSmall";
    case Err::NotCommutable: return "NotCommutable";
    case Err::BadPlacement: return "BadPlacement";
    case Err::BadConfiguration: return "BadConfiguration";
    case Err::NotSuperstabilized: return "NotSuperstabilized";
    case Err::NotThin: return "NotThin";
    case Err::NoDecomposition: return "NoDecomposition";
    case Err::RoutesDisagree: return "RoutesDisagree";
    case Err::MissingMetadata: return "MissingMetadata";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
  }
  return "Error";
}

void PolyF2::normalize() {
  std::sort(terms_.begin(), terms_.end());
  // Equal pairs cancel over F2.
  std::size_t w = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    if (i + 1 < terms_.size() && terms_[i] == terms_[i + 1]) {
      i += 2;
    } else {
      terms_[w++] = terms_[i++];
    }
  }
  terms_.resize(w);
}

PolyF2& PolyF2::operator+=(const PolyF2& o) {
  if (o.terms_.empty()) return *this;
  std::vector<std::uint64_t> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    if (terms_[i] < o.terms_[j]) {
      merged.push_back(terms_[i++]);
    } else if (o.terms_[j] < terms_[i]) {
      merged.push_back(o.terms_[j++]);
    } else {
      i++;
      j++;
    }
  }
  merged.insert(merged.end(), terms_.begin() + i, terms_.end());
  merged.insert(merged.end(), o.terms_.begin() + j, o.terms_.end());
  terms_ = std::move(merged);
  return *this;
}

PolyF2 PolyF2::operator*(const PolyF2& o) const {
  PolyF2 r;
  for (auto a : terms_) {
    PolyF2 part;
    part.terms_.reserve(o.terms_.size());
    for (auto b : o.terms_) part.terms_.push_back((Mono::fromRaw(a) * Mono::fromRaw(b)).raw());
    part.normalize();
    r += part;
  }
  return r;
}

PolyF2 PolyF2::operator*(Mono m) const {
  PolyF2 r;
  r.terms_.reserve(terms_.size());
  for (auto a : terms_) r.terms_.push_back((Mono::fromRaw(a) * m).raw());
  std::sort(r.terms_.begin(), r.terms_.end());
  return r;
}

PolyF2 PolyF2::relabel(int from, int to) const {
  PolyF2 r;
  r.terms_.reserve(terms_.size());
  for (auto a : terms_) r.terms_.push_back(Mono::fromRaw(a).relabel(from, to).raw());
  r.normalize();
  return r;
}

PolyF2 PolyF2::reduceMod(std::uint32_t killedMask) const {
  if (killedMask == 0) return *this;
  PolyF2 r;
  for (auto a : terms_)
    if (!Mono::fromRaw(a).touches(killedMask)) r.terms_.push_back(a);
  return r;
}

std::string PolyF2::str(int numVars) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto b : terms_) {
    Mono m = Mono::fromRaw(b);
    if (!first) os << " + ";
    first = false;
    if (m.isOne()) {
      os << "1";
      continue;
    }
    bool leading = true;
    for (int v = 0; v < numVars; v++) {
      int e = m.exponent(v);
      if (e == 0) continue;
      if (!leading) os << "*";
      leading = false;
      os << "U" << v;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

PolyF2 geometricSum(int jA, int jB, int m) {
  if (jA == jB) fail(Err::SameIndex, "geometricSum needs distinct variables");
  PolyF2 r;
  for (int a = 0; a < m; a++) r += PolyF2(Mono::var(jA, a) * Mono::var(jB, m - 1 - a));
  return r;
}

LaurentPoly LaurentPoly::constant(int numT, long long c) {
  LaurentPoly p(numT);
  if (c != 0) p.coeffs_[Key(1 + numT, 0)] = c;
  return p;
}

void LaurentPoly::add(const Key& k, long long c) {
  if (c == 0) return;
  auto [it, fresh] = coeffs_.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto& [k, c] : o.coeffs_) r.add(k, c);
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto& [k, c] : o.coeffs_) r.add(k, -c);
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r(numT_);
  for (auto& [ka, ca] : coeffs_) {
    for (auto& [kb, cb] : o.coeffs_) {
      Key k(ka.size());
      for (std::size_t i = 0; i < k.size(); i++) k[i] = ka[i] + kb[i];
      r.add(k, ca * cb);
    }
  }
  return r;
}

LaurentPoly LaurentPoly::divideExact(const LaurentPoly& q) const {
  if (q.isZero()) fail(Err::NotDivisible, "division by zero");
  LaurentPoly rem = *this;
  LaurentPoly quot(numT_);
  // Leading term under the map ordering (lexicographic on the key).
  const auto& qLead = *q.coeffs_.rbegin();
  // Any exact quotient has lex-lowest term = lowest(p)/lowest(q); quotient
  // keys below that bound certify failure.
  Key lowBound;
  if (!rem.isZero()) {
    const auto& pLow = *rem.coeffs_.begin();
    const auto& qLow = *q.coeffs_.begin();
    lowBound.resize(pLow.first.size());
    for (std::size_t i = 0; i < lowBound.size(); i++) lowBound[i] = pLow.first[i] - qLow.first[i];
  }
  while (!rem.isZero()) {
    const auto& pLead = *rem.coeffs_.rbegin();
    if (pLead.second % qLead.second != 0) fail(Err::NotDivisible, "coefficient not divisible");
    Key d(pLead.first.size());
    for (std::size_t i = 0; i < d.size(); i++) d[i] = pLead.first[i] - qLead.first[i];
    if (d < lowBound) fail(Err::NotDivisible, "quotient support exhausted");
    long long c = pLead.second / qLead.second;
    quot.add(d, c);
    LaurentPoly dTerm(numT_);
    dTerm.add(d, c);
    rem = rem - dTerm * q;
  }
  return quot;
}

LaurentPoly LaurentPoly::evalQminus1() const {
  LaurentPoly r(numT_);
  for (auto& [k, c] : coeffs_) {
    if (k[0] % 2 != 0) fail(Err::GradingMismatch, "half-integer q-exponent at q=-1");
    int m = k[0] / 2;
    Key k2 = k;
    k2[0] = 0;
    r.add(k2, (m % 2 == 0) ? c : -c);
  }
  return r;
}

bool LaurentPoly::doubledAtMost(const LaurentPoly& h) const {
  for (auto& [k, c] : coeffs_) {
    long long hc = h.coeff(k);
    if (2 * c > hc) return false;
  }
  return true;
}

bool LaurentPoly::isSymmetric() const {
  if (numT_ != 1) return false;
  for (auto& [k, c] : coeffs_) {
    Key mirror{k[0] - 2 * k[1], -k[1]};
    if (coeff(mirror) != c) return false;
  }
  return true;
}

namespace {

void renderExp(std::ostringstream& os, const char* name, int e2, bool& leading) {
  if (e2 == 0) return;
  if (!leading) os << "*";
  leading = false;
  os << name;
  if (e2 == 2) return;  // exponent 1 elided
  os << "^";
  if (e2 % 2 == 0) {
    os << e2 / 2;
  } else {
    os << e2 << "/2";
  }
}

}  // namespace

std::string LaurentPoly::str() const {
  if (coeffs_.empty()) return "0";
  // Terms sorted by (t-exponents lexicographic, then q-exponent).
  std::vector<std::pair<Key, long long>> terms(coeffs_.begin(), coeffs_.end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    for (std::size_t i = 1; i < a.first.size(); i++)
      if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
    return a.first[0] < b.first[0];
  });
  std::ostringstream os;
  bool first = true;
  for (auto& [k, c] : terms) {
    long long cc = c;
    if (first) {
      if (cc < 0) {
        os << "-";
        cc = -cc;
      }
    } else {
      os << (cc < 0 ? " - " : " + ");
      if (cc < 0) cc = -cc;
    }
    first = false;
    bool allZero = true;
    for (auto e : k)
      if (e != 0) allZero = false;
    if (allZero) {
      os << cc;
      continue;
    }
    bool leading = true;
    if (cc != 1) {
      os << cc;
      leading = false;
    }
    if (k[0] != 0) {
      if (!leading) os << "*";
      bool l2 = true;
      renderExp(os, "q", k[0], l2);
      leading = false;
    }
    for (int i = 1; i <= numT_; i++) {
      if (k[i] == 0) continue;
      if (!leading) os << "*";
      bool l2 = true;
      std::string name = (numT_ == 1) ? "t" : ("t" + std::to_string(i));
      renderExp(os, name.c_str(), k[i], l2);
      leading = false;
    }
  }
  return os.str();
}

Laurent1 laurent1Mul(const Laurent1& a, const Laurent1& b) {
  Laurent1 r;
  for (auto& [ea, ca] : a)
    for (auto& [eb, cb] : b) {
      auto& c = r[ea + eb];
      c += ca * cb;
      if (c == 0) r.erase(ea + eb);
    }
  return r;
}

Laurent1 laurent1Sub(const Laurent1& a, const Laurent1& b) {
  Laurent1 r = a;
  for (auto& [e, c] : b) {
    auto& rc = r[e];
    rc -= c;
    if (rc == 0) r.erase(e);
  }
  return r;
}

bool laurent1DivideExact(const Laurent1& p, const Laurent1& q, Laurent1& out) {
  out.clear();
  if (q.empty()) return false;
  Laurent1 rem = p;
  auto qLead = *q.rbegin();
  int lowBound = rem.empty() ? 0 : rem.begin()->first - q.begin()->first;
  while (!rem.empty()) {
    auto pLead = *rem.rbegin();
    if (pLead.second % qLead.second != 0) return false;
    int d = pLead.first - qLead.first;
    if (d < lowBound) return false;
    long long c = pLead.second / qLead.second;
    out[d] = c;
    Laurent1 t{{d, c}};
    rem = laurent1Sub(rem, laurent1Mul(t, q));
  }
  return true;
}

std::string laurent1Str(const Laurent1& p, const std::string& var) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : p) {
    long long cc = c;
    if (first) {
      if (cc < 0) {
        os << "-";
        cc = -cc;
      }
    } else {
      os << (cc < 0 ? " - " : " + ");
      if (cc < 0) cc = -cc;
    }
    first = false;
    if (e == 0) {
      os << cc;
      continue;
    }
    if (cc != 1) os << cc << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

}  // namespace gridfloer
