#ifndef GRIDFLOER_ALGEBRA_HPP
#define GRIDFLOER_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridfloer/errors.hpp"

namespace gridfloer {

// Monomial in the U variables, one variable per O-marking.  Variables are
// indexed 0..n-1 by the column of the O-marking.  Exponents are packed six
// bits each into a single word, so products stay cheap inside the reduction
// inner loops.  Exponents above 62 overflow the packing and are rejected.
class Mono {
 public:
  static constexpr int kBitsPerVar = 6;
  static constexpr int kMaxVars = 10;
  static constexpr std::uint64_t kVarMask = (1u << kBitsPerVar) - 1;

  Mono() : bits_(0) {}
  static Mono var(int v, int e = 1) {
    Mono m;
    m.bits_ = static_cast<std::uint64_t>(e) << (kBitsPerVar * v);
    return m;
  }

  int exponent(int v) const { return static_cast<int>((bits_ >> (kBitsPerVar * v)) & kVarMask); }
  bool isOne() const { return bits_ == 0; }
  std::uint64_t raw() const { return bits_; }
  static Mono fromRaw(std::uint64_t b) {
    Mono m;
    m.bits_ = b;
    return m;
  }

  Mono operator*(Mono o) const {
    Mono m;
    m.bits_ = bits_ + o.bits_;
    checkNoCarry(m.bits_, bits_);
    return m;
  }
  // Exact division; caller must know o divides *this.
  Mono operator/(Mono o) const {
    Mono m;
    m.bits_ = bits_ - o.bits_;
    return m;
  }
  bool divisibleBy(Mono o) const {
    for (int v = 0; v < kMaxVars; v++)
      if (exponent(v) < o.exponent(v)) return false;
    return true;
  }
  int totalDegree() const {
    int d = 0;
    for (int v = 0; v < kMaxVars; v++) d += exponent(v);
    return d;
  }
  bool operator==(Mono o) const { return bits_ == o.bits_; }
  bool operator<(Mono o) const { return bits_ < o.bits_; }

  // True if some variable in `mask` (bit v set) has positive exponent.
  bool touches(std::uint32_t mask) const {
    for (int v = 0; v < kMaxVars; v++)
      if ((mask >> v & 1u) && exponent(v) > 0) return true;
    return false;
  }

  // Move the full exponent of variable `from` onto variable `to`.
  Mono relabel(int from, int to) const {
    int e = exponent(from);
    if (e == 0) return *this;
    Mono m;
    m.bits_ = bits_ - (static_cast<std::uint64_t>(e) << (kBitsPerVar * from));
    return m * var(to, e);
  }

 private:
  static void checkNoCarry(std::uint64_t sum, std::uint64_t a) {
    if (sum < a) fail(Err::TooLarge, "monomial exponent overflow");
  }
  std::uint64_t bits_;
};

// F2 polynomial in the U variables: a set of monomials, addition is symmetric
// difference.  Terms are kept sorted for canonical form.
class PolyF2 {
 public:
  PolyF2() = default;
  explicit PolyF2(Mono m) : terms_{m.raw()} {}
  static PolyF2 zero() { return PolyF2(); }
  static PolyF2 one() { return PolyF2(Mono()); }

  bool isZero() const { return terms_.empty(); }
  bool isOne() const { return terms_.size() == 1 && terms_[0] == 0; }
  // Units of F2[U...] are exactly {1}.
  bool isUnit() const { return isOne(); }
  std::size_t termCount() const { return terms_.size(); }
  Mono term(std::size_t i) const { return Mono::fromRaw(terms_[i]); }

  PolyF2& operator+=(const PolyF2& o);
  PolyF2 operator+(const PolyF2& o) const {
    PolyF2 r = *this;
    r += o;
    return r;
  }
  PolyF2 operator*(const PolyF2& o) const;
  PolyF2 operator*(Mono m) const;
  bool operator==(const PolyF2& o) const { return terms_ == o.terms_; }

  // Substitute U_from := U_to (exponents merge).
  PolyF2 relabel(int from, int to) const;
  // Drop every term that touches a killed variable.
  PolyF2 reduceMod(std::uint32_t killedMask) const;

  std::string str(int numVars) const;

  template <typename F>
  void forEach(F&& f) const {
    for (auto b : terms_) f(Mono::fromRaw(b));
  }

 private:
  void normalize();
  std::vector<std::uint64_t> terms_;
};

// Which U variables are set to zero.  Mask bit v corresponds to the variable
// of the O-marking in column v.
struct CoefficientSpec {
  std::uint32_t killedMask = 0;
  bool kills(int v) const { return (killedMask >> v) & 1u; }
};

// sum_{a+b=m-1} U_jA^a U_jB^b, the exact quotient (U_jA^m + U_jB^m)/(U_jA + U_jB).
PolyF2 geometricSum(int jA, int jB, int m);

// Integer Laurent polynomial in q and t_1..t_l (l may be 0).  Exponents are
// stored doubled so half-integer gradings stay exact.
class LaurentPoly {
 public:
  using Key = std::vector<int>;  // [2m, 2a_1, ..., 2a_l]

  LaurentPoly() = default;
  explicit LaurentPoly(int numT) : numT_(numT) {}
  static LaurentPoly constant(int numT, long long c);

  int numT() const { return numT_; }
  bool isZero() const { return coeffs_.empty(); }
  long long coeff(const Key& k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? 0 : it->second;
  }
  void add(const Key& k, long long c);
  const std::map<Key, long long>& terms() const { return coeffs_; }

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const { return coeffs_ == o.coeffs_; }

  // Exact division; throws NotDivisible.
  LaurentPoly divideExact(const LaurentPoly& q) const;

  // Substitute q = -1.  All q-exponents must be integers; result has the
  // same number of t variables with the q slot forced to zero.
  LaurentPoly evalQminus1() const;

  // Coefficient-wise comparison r <= floor(h/2) (used for rank bounds).
  bool doubledAtMost(const LaurentPoly& h) const;

  // Symmetry coeff(q^m t^a) == coeff(q^{m-2a} t^{-a}); knots only (numT == 1).
  bool isSymmetric() const;

  std::string str() const;  // canonical text form

 private:
  int numT_ = 0;
  std::map<Key, long long> coeffs_;
};

// Laurent polynomial in one variable v with integer exponents; thin-knot
// bookkeeping.  Represented as exponent -> coefficient.
using Laurent1 = std::map<int, long long>;

Laurent1 laurent1Mul(const Laurent1& a, const Laurent1& b);
Laurent1 laurent1Sub(const Laurent1& a, const Laurent1& b);
bool laurent1DivideExact(const Laurent1& p, const Laurent1& q, Laurent1& out);
std::string laurent1Str(const Laurent1& p, const std::string& var);

}  // namespace gridfloer

#endif
