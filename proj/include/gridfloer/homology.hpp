#ifndef GRIDFLOER_HOMOLOGY_HPP
#define GRIDFLOER_HOMOLOGY_HPP

#include <map>
#include <optional>

#include "gridfloer/complex.hpp"
#include "gridfloer/maps.hpp"

namespace gridfloer {

// --- F2 linear algebra -------------------------------------------------------

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t bits) : bits_(bits), w_((bits + 63) / 64, 0) {}
  std::size_t size() const { return bits_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void flip(std::size_t i) { w_[i >> 6] ^= 1ull << (i & 63); }
  void operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size(); i++) w_[i] ^= o.w_[i];
  }
  bool any() const {
    for (auto v : w_)
      if (v) return true;
    return false;
  }
  int lowestSet() const {
    for (std::size_t i = 0; i < w_.size(); i++)
      if (w_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w_[i]));
    return -1;
  }
  bool operator==(const BitVec& o) const { return bits_ == o.bits_ && w_ == o.w_; }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> w_;
};

struct F2Matrix {
  int rows = 0, cols = 0;
  std::vector<BitVec> col;

  static F2Matrix zero(int r, int c);
  static F2Matrix identity(int n);
  F2Matrix multiply(const F2Matrix& rightFactor) const;  // this * rightFactor
  F2Matrix add(const F2Matrix& o) const;
  int rank() const;
  bool isZero() const;
  bool isIdentity() const;
};

// --- homology of a reduced complex ----------------------------------------------

using GradingKey = std::vector<int>;  // a2 per component

// One (A, M) block of the monomial-expanded complex: basis of terms
// U^e * generator at that bigrading, homology representatives, and the
// pivot echelon (boundary columns first, then representative columns) used
// to express arbitrary cycles in the homology basis.
struct HBlock {
  int m2 = 0;
  std::vector<Term> basis;  // Term.gen is a dense SmallComplex index
  std::map<std::pair<std::uint32_t, std::uint64_t>, int> index;
  std::vector<Element> reps;
  struct Pivot {
    int row;
    BitVec vec;
    int repIdx;  // -1 for boundary columns
  };
  std::vector<Pivot> pivots;
  int dim() const { return static_cast<int>(reps.size()); }
  int indexOf(const Term& t) const;
};

struct ASlice {
  GradingKey a2;
  std::map<int, HBlock> blocks;  // keyed by m2
};

struct HomologyOptions {
  // Alexander window per component (doubled values, inclusive); defaults to
  // the generator range of the complex.
  std::optional<GradingKey> a2Lo, a2Hi;
  bool keepReps = true;
};

class HomologyResult {
 public:
  CoeffFlavor flavor = TILDE;
  int numComponents = 1;
  std::map<GradingKey, ASlice> slices;
  const SmallComplex* sc = nullptr;

  std::map<std::pair<GradingKey, int>, int> dims() const;
  LaurentPoly poincare() const;
  int dimAt(const GradingKey& a2, int m2) const;

  // Express a cycle (dense-index element at the given grading) in the
  // homology basis; throws ValidationError if it is not a cycle class.
  BitVec classOf(const GradingKey& a2, int m2, const Element& cycle) const;
};

HomologyResult homologyOf(const SmallComplex& sc, CoeffFlavor flavor,
                          const HomologyOptions& opt = {});

// Dimensions of the unreduced complex's homology over the same window
// (sparse Gaussian elimination; oracle for the reduction).
std::map<std::pair<GradingKey, int>, int> bruteHomology(const ChainComplex& c,
                                                        const HomologyOptions& opt = {});

// --- induced maps ------------------------------------------------------------------

struct InducedMap {
  Bigrading shift;
  std::map<std::pair<GradingKey, int>, F2Matrix> blocks;  // keyed by source grading

  LaurentPoly rankPoly(int numT) const;
  InducedMap multiply(const InducedMap& rightFactor) const;
  InducedMap add(const InducedMap& o) const;
  InducedMap addIdentity() const;
  bool isZero() const;
  bool isIdentity(const HomologyResult& h) const;
};

InducedMap inducedOnHomology(const HomologyResult& h, const LinearMap& f, const Reduction& red);

// dim ker - rank over the whole graded space for an induced map squaring to
// zero.
int homologyOfInduced(const HomologyResult& h, const InducedMap& f);
// Restricted to the diagonal M - A = diag (knots only).
int homologyOfInducedOnDiagonal(const HomologyResult& h, const InducedMap& f, int diag);

// --- hat invariants -----------------------------------------------------------------

struct HatData {
  std::shared_ptr<ChainComplex> complex;  // simply blocked
  Reduction reduction;
  HomologyResult homology;
  LaurentPoly h;
};

// Simply blocked homology over the symmetric Alexander window, with a margin
// slice below that is checked to vanish.  keepLog enables map transport.
HatData computeHat(const GridDiagram& g, bool keepLog, const BuildOptions& opt = {});

// Tilde route: Poincare polynomial of the fully blocked homology divided by
// prod_i (1 + q^-1 t_i^-1)^(k_i - 1).
LaurentPoly hatFromTilde(const GridDiagram& g, const BuildOptions& opt = {});

// h with the two-route cross-check; throws RoutesDisagree.
LaurentPoly hflHatPoly(const GridDiagram& g, const BuildOptions& opt = {});

struct InvolutionReport {
  LaurentPoly h, r;
  bool involutionSquaresToId = false;
  bool psiPhiEqualsPhiPsi = false;
  bool phiPsiSquareZero = false;
  bool rankBound = false;
  bool ok() const {
    return involutionSquaresToId && psiPhiEqualsPhiPsi && phiPsiSquareZero && rankBound;
  }
};

InvolutionReport involutionFrom(const HatData& hat);
InvolutionReport involutionRankPoly(const GridDiagram& g, const BuildOptions& opt = {});

struct ThinReport {
  bool thin = false;
  int s = 0;  // h = t^s htilde(qt)
  bool sigmaThin = false;
  Laurent1 hTilde, rTilde;
  int ladderM = 0;
  bool ladderAscending = true;  // ladder 1 + v + ... + v^{2m} vs descending
  LaurentPoly r;
};

ThinReport thinSolve(const LaurentPoly& h, int signature);

struct StructureReport {
  int dimHPhi = -1, dimHPsi = -1;
  std::map<int, int> dimHPhiByDiagonal;
};

StructureReport structureChecks(const HatData& hat);

struct AlexanderCheckResult {
  bool matches = false;
  int sign = 0;
};
// h(-1,t) against the symmetrized Alexander coefficients (lowest degree
// first); global sign flips allowed and reported.
AlexanderCheckResult alexanderCheck(const LaurentPoly& h, const std::vector<long long>& delta);

// Alexander polynomial of a knot grid from the winding-number determinant
// (independent oracle; symmetrized, sign fixed by Delta(1) = 1).
std::vector<long long> alexanderFromWinding(const GridDiagram& g);

}  // namespace gridfloer

#endif
