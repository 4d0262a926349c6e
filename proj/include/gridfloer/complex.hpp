#ifndef GRIDFLOER_COMPLEX_HPP
#define GRIDFLOER_COMPLEX_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridfloer/grid.hpp"

namespace gridfloer {

// One basis term U^e * x of the free module over the U polynomial ring.
struct Term {
  std::uint32_t gen = 0;  // state rank
  Mono mono;
  bool operator==(const Term& o) const { return gen == o.gen && mono == o.mono; }
  bool operator<(const Term& o) const {
    if (gen != o.gen) return gen < o.gen;
    return mono < o.mono;
  }
};

// F2-linear combination of terms, kept sorted and cancelled.
class Element {
 public:
  Element() = default;
  explicit Element(Term t) : terms_{t} {}
  static Element gen(std::uint32_t g) { return Element(Term{g, Mono()}); }

  bool isZero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  Element& operator+=(const Element& o);
  Element operator+(const Element& o) const {
    Element r = *this;
    r += o;
    return r;
  }
  bool operator==(const Element& o) const { return terms_ == o.terms_; }

  Element times(Mono m) const;
  Element times(const PolyF2& p) const;
  Element reduceMod(std::uint32_t killedMask) const;

  // Builder: append then normalize.
  void push(Term t) { terms_.push_back(t); }
  void pushScaled(std::uint32_t g, const PolyF2& p, Mono extra);
  void normalize();

  std::string str(const GridDiagram& g) const;

 private:
  std::vector<Term> terms_;
};

struct BuildOptions {
  enum D2Check { AUTO, OFF, SAMPLED, EXHAUSTIVE };
  D2Check d2Check = AUTO;
  std::size_t d2Samples = 10000;
  std::uint64_t seed = 0;
  int maxN = 10;
};

// The grid chain complex over the chosen coefficients.  Generators are the
// n! states, indexed by lexicographic rank; the differential counts empty
// rectangles avoiding every X, weighted by the O-markings crossed.  Columns
// are generated on the fly; nothing quadratic in n! is stored here.
class ChainComplex {
 public:
  ChainComplex(GridDiagram g, CoefficientSpec spec);

  const GridDiagram& grid() const { return g_; }
  const CoefficientSpec& coeff() const { return coeff_; }
  std::uint32_t numGens() const { return numGens_; }

  Element d(const Term& t) const;
  Element d(const Element& e) const;
  void dColumn(std::uint32_t gen, std::vector<std::pair<std::uint32_t, PolyF2>>& out) const;

  Bigrading grading(std::uint32_t gen) const;
  Bigrading grading(const Term& t) const;  // U_v shifts by (-2, -e_comp)

  // Gradings for every generator at once (winding-number tables calibrated
  // against the pairwise-count formula on one state).
  void bulkGradings(std::vector<std::int16_t>& m2, std::vector<std::int16_t>& a2flat) const;

  void verifyD2(const BuildOptions& opt) const;

 private:
  GridDiagram g_;
  CoefficientSpec coeff_;
  std::uint32_t numGens_;
};

std::shared_ptr<ChainComplex> buildComplex(const GridDiagram& g, CoeffFlavor flavor,
                                           const BuildOptions& opt = {});

// --- linear maps --------------------------------------------------------------

// F2-linear map between (possibly identical) grid complexes, evaluated term
// by term.  Module maps extend their generator columns U-linearly; the
// special-marking maps act on the monomial part as well.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual Element applyTerm(const Term& t) const = 0;
  Element apply(const Element& e) const;

  std::string name;
  Bigrading shift;               // declared grading shift (doubled)
  bool shiftKnown = false;
  std::uint32_t equivariantMask = 0xffffffffu;  // variables the map commutes with
  const ChainComplex* src = nullptr;
  const ChainComplex* dst = nullptr;
};

using MapPtr = std::shared_ptr<const LinearMap>;

// P-module map given by its generator columns.
MapPtr moduleMap(const ChainComplex& src, const ChainComplex& dst, std::string name,
                 Bigrading shift, std::function<Element(std::uint32_t)> column);
MapPtr zeroMap(const ChainComplex& c);
MapPtr identityMap(const ChainComplex& c);
// Identity of the underlying module viewed between two coefficient systems.
MapPtr identityBetween(const ChainComplex& src, const ChainComplex& dst, std::string name);
MapPtr differentialMap(const ChainComplex& c);
MapPtr compose(MapPtr outer, MapPtr inner);  // outer after inner
MapPtr sum(std::vector<MapPtr> maps);
MapPtr scale(const PolyF2& p, MapPtr f);
// f restricted/pushed to another coefficient system (same grid).
MapPtr withCoefficients(MapPtr f, const ChainComplex& src, const ChainComplex& dst);

// [d, f] = d o f + f o d.
MapPtr commutatorWithD(MapPtr f);

// --- identity verification -----------------------------------------------------

struct VerifyOptions {
  // Monomial prefixes tested besides bare generators: U_a^p U_b^q with
  // p+q <= maxPower over the listed variables (identities involving the
  // special-marking maps are only linear over the other variables).
  int maxPower = 0;
  int powerVar = -1;
  int powerVar2 = -1;
  std::size_t sampleThreshold = 50000;  // above this many generators, sample
  std::size_t sampleCount = 10000;
  std::uint64_t seed = 0;
};

struct VerifyReport {
  bool equal = true;
  bool sampled = false;
  std::uint64_t seed = 0;
  std::size_t tested = 0;
  std::optional<Term> witness;
  std::string lhsValue, rhsValue;
  std::string note;
};

VerifyReport verifyChainIdentity(MapPtr lhs, MapPtr rhs, const VerifyOptions& opt = {});

// Equivariance spot check: f(U_v t) == U_v f(t) on sampled generators for
// every v in the declared mask.
VerifyReport verifyEquivariance(MapPtr f, const VerifyOptions& opt = {});

// --- reduction -------------------------------------------------------------------

// Dense sub-complex produced by cancelling unit differential entries.
struct SmallComplex {
  const ChainComplex* parent = nullptr;
  std::vector<std::uint32_t> gens;          // original generator ids
  std::vector<Bigrading> grading;
  std::vector<std::vector<std::pair<int, PolyF2>>> d;  // by dense index
  CoefficientSpec coeff;
  int numComponents = 0;

  int indexOf(std::uint32_t gen) const;  // -1 if absent
};

struct ReduceOptions {
  bool keepLog = true;  // required for include/project/homotopy transport
  bool verbose = false;
};

class Reduction {
 public:
  SmallComplex reduced;

  // Homotopy-equivalence data, replayed from the cancellation log.
  Element includeApply(const Element& reducedElem) const;  // reduced -> original
  Element projectApply(const Element& origElem) const;     // original -> reduced
  Element homotopyApply(const Element& origElem) const;    // original -> original

  // Transported module map on the reduced complex: project o f o include.
  Element transportedColumn(const LinearMap& f, int denseIdx) const;

  bool hasLog() const { return hasLog_; }
  std::size_t steps() const { return numSteps_; }

 private:
  friend Reduction reduce(const ChainComplex& c, const ReduceOptions& opt);
  struct Entry {
    std::uint32_t gen;
    PolyF2 coeff;
  };
  struct Step {
    std::uint32_t a, b;
    std::vector<Entry> col;  // d(a) without the b term
    std::vector<Entry> row;  // sources g with d(g) containing b, without a
  };
  std::vector<Step> log_;
  bool hasLog_ = false;
  std::size_t numSteps_ = 0;
};

Reduction reduce(const ChainComplex& c, const ReduceOptions& opt = {});

std::string dumpComplex(const SmallComplex& sc);

}  // namespace gridfloer

#endif
