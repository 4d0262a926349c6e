#include "gridfloer/homology.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "gridfloer/parallel.hpp"

namespace gridfloer {

// --- F2Matrix -----------------------------------------------------------------

F2Matrix F2Matrix::zero(int r, int c) {
  F2Matrix m;
  m.rows = r;
  m.cols = c;
  m.col.assign(c, BitVec(r));
  return m;
}

F2Matrix F2Matrix::identity(int n) {
  F2Matrix m = zero(n, n);
  for (int i = 0; i < n; i++) m.col[i].flip(i);
  return m;
}

F2Matrix F2Matrix::multiply(const F2Matrix& rightFactor) const {
  F2Matrix r = zero(rows, rightFactor.cols);
  for (int j = 0; j < rightFactor.cols; j++) {
    for (int i = 0; i < cols && i < rightFactor.rows; i++)
      if (rightFactor.col[j].get(i)) r.col[j] ^= col[i];
  }
  return r;
}

F2Matrix F2Matrix::add(const F2Matrix& o) const {
  F2Matrix r = *this;
  for (int j = 0; j < cols; j++) r.col[j] ^= o.col[j];
  return r;
}

int F2Matrix::rank() const {
  std::vector<BitVec> pivots;
  std::vector<int> pivotRow;
  for (int j = 0; j < cols; j++) {
    BitVec v = col[j];
    for (std::size_t p = 0; p < pivots.size(); p++)
      if (v.get(pivotRow[p])) v ^= pivots[p];
    int low = v.lowestSet();
    if (low >= 0) {
      pivots.push_back(v);
      pivotRow.push_back(low);
    }
  }
  return static_cast<int>(pivots.size());
}

bool F2Matrix::isZero() const {
  for (auto& c : col)
    if (c.any()) return false;
  return true;
}

bool F2Matrix::isIdentity() const {
  if (rows != cols) return false;
  for (int j = 0; j < cols; j++) {
    BitVec v = col[j];
    v.flip(j);
    if (v.any()) return false;
  }
  return true;
}

// --- slice construction ----------------------------------------------------------

int HBlock::indexOf(const Term& t) const {
  auto it = index.find({t.gen, t.mono.raw()});
  return it == index.end() ? -1 : it->second;
}

namespace {

// Monomials in the alive variables with prescribed total degree per component.
void enumerateMonos(const std::vector<std::vector<int>>& varsByComp,
                    const std::vector<int>& delta, std::size_t comp, Mono cur,
                    std::vector<Mono>& out) {
  if (comp == varsByComp.size()) {
    out.push_back(cur);
    return;
  }
  const auto& vars = varsByComp[comp];
  int d = delta[comp];
  if (d == 0) {
    enumerateMonos(varsByComp, delta, comp + 1, cur, out);
    return;
  }
  if (vars.empty()) return;
  // compositions of d over vars
  std::vector<int> e(vars.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t vi, int left) {
    if (vi + 1 == vars.size()) {
      Mono m = cur;
      for (std::size_t u = 0; u + 1 < vars.size(); u++)
        if (e[u]) m = m * Mono::var(vars[u], e[u]);
      if (left) m = m * Mono::var(vars.back(), left);
      enumerateMonos(varsByComp, delta, comp + 1, m, out);
      return;
    }
    for (int take = 0; take <= left; take++) {
      e[vi] = take;
      rec(vi + 1, left - take);
    }
    e[vi] = 0;
  };
  rec(0, d);
}

struct SliceJob {
  GradingKey a2;
  ASlice slice;
  bool built = false;
};

void buildSlice(const SmallComplex& sc, const GradingKey& key,
                const std::vector<std::vector<int>>& varsByComp, ASlice& slice) {
  slice.a2 = key;
  const int l = sc.numComponents;
  std::vector<Mono> monos;
  std::vector<int> delta(l);
  for (std::size_t gi = 0; gi < sc.gens.size(); gi++) {
    const Bigrading& bg = sc.grading[gi];
    bool ok = true;
    for (int i = 0; i < l && ok; i++) {
      int diff = bg.a2[i] - key[i];
      if (diff < 0 || diff % 2) ok = false;
      else delta[i] = diff / 2;
    }
    if (!ok) continue;
    monos.clear();
    enumerateMonos(varsByComp, delta, 0, Mono(), monos);
    for (Mono m : monos) {
      int m2 = bg.m2 - 4 * m.totalDegree();
      HBlock& blk = slice.blocks[m2];
      blk.m2 = m2;
      Term t{static_cast<std::uint32_t>(gi), m};
      blk.index[{t.gen, t.mono.raw()}] = static_cast<int>(blk.basis.size());
      blk.basis.push_back(t);
    }
  }
}

// d of a block basis element, as coordinates in the block below.
void dCoords(const SmallComplex& sc, const ASlice& slice, const HBlock& blk, int bi,
             const HBlock* below, BitVec& out) {
  const Term& t = blk.basis[bi];
  if (!below) return;
  for (auto& [j, poly] : sc.d[t.gen]) {
    poly.forEach([&](Mono nu) {
      Term target{static_cast<std::uint32_t>(j), t.mono * nu};
      int idx = below->indexOf(target);
      if (idx >= 0) out.flip(idx);
      // terms outside the slice cannot occur: d preserves the Alexander
      // grading and drops M by one
    });
  }
}

struct PivotTable {
  std::vector<HBlock::Pivot> pivots;
  // Reduce v (and optional combo) against the table; returns true if v ends zero.
  bool reduce(BitVec& v, BitVec* combo, std::vector<const BitVec*>* comboSrc) const {
    for (auto& p : pivots) {
      if (v.get(p.row)) {
        v ^= p.vec;
        if (combo && comboSrc && p.repIdx >= -1) {
          // combos tracked externally
        }
      }
    }
    return !v.any();
  }
};

}  // namespace

std::map<std::pair<GradingKey, int>, int> HomologyResult::dims() const {
  std::map<std::pair<GradingKey, int>, int> d;
  for (auto& [key, slice] : slices)
    for (auto& [m2, blk] : slice.blocks)
      if (blk.dim() > 0) d[{key, m2}] = blk.dim();
  return d;
}

int HomologyResult::dimAt(const GradingKey& a2, int m2) const {
  auto it = slices.find(a2);
  if (it == slices.end()) return 0;
  auto bt = it->second.blocks.find(m2);
  if (bt == it->second.blocks.end()) return 0;
  return bt->second.dim();
}

LaurentPoly HomologyResult::poincare() const {
  LaurentPoly p(numComponents);
  for (auto& [km, dim] : dims()) {
    LaurentPoly::Key key(1 + numComponents);
    key[0] = km.second;
    for (int i = 0; i < numComponents; i++) key[1 + i] = km.first[i];
    p.add(key, dim);
  }
  return p;
}

BitVec HomologyResult::classOf(const GradingKey& a2, int m2, const Element& cycle) const {
  auto it = slices.find(a2);
  if (it == slices.end()) {
    if (!cycle.isZero())
      fail(Err::ValidationError, "cycle at a grading outside the computed window");
    return BitVec(0);
  }
  auto bt = it->second.blocks.find(m2);
  if (bt == it->second.blocks.end()) {
    if (!cycle.isZero()) fail(Err::ValidationError, "cycle at an empty block");
    return BitVec(0);
  }
  const HBlock& blk = bt->second;
  BitVec v(blk.basis.size());
  for (auto& t : cycle.terms()) {
    int idx = blk.indexOf(t);
    if (idx < 0) fail(Err::ValidationError, "cycle term outside the block basis");
    v.flip(idx);
  }
  BitVec cls(blk.reps.size());
  for (auto& p : blk.pivots) {
    if (v.get(p.row)) {
      v ^= p.vec;
      if (p.repIdx >= 0) cls.flip(p.repIdx);
    }
  }
  if (v.any()) fail(Err::ValidationError, "element is not a cycle class member");
  return cls;
}

HomologyResult homologyOf(const SmallComplex& sc, CoeffFlavor flavor,
                          const HomologyOptions& opt) {
  HomologyResult res;
  res.flavor = flavor;
  res.numComponents = sc.numComponents;
  res.sc = &sc;
  if (sc.gens.empty()) return res;

  const GridDiagram& g = sc.parent->grid();
  const int l = sc.numComponents;
  std::vector<std::vector<int>> varsByComp(l);
  for (int v = 0; v < g.n; v++)
    if (!sc.coeff.kills(v)) varsByComp[g.wLab[v].comp].push_back(v);

  GradingKey lo(l), hi(l);
  for (int i = 0; i < l; i++) {
    int mn = sc.grading[0].a2[i], mx = mn;
    for (auto& bg : sc.grading) {
      mn = std::min(mn, bg.a2[i]);
      mx = std::max(mx, bg.a2[i]);
    }
    lo[i] = mn;
    hi[i] = mx;
  }
  if (opt.a2Lo) lo = *opt.a2Lo;
  if (opt.a2Hi) hi = *opt.a2Hi;

  // Enumerate window keys with the parity carried by the generators.
  std::vector<GradingKey> keys;
  GradingKey cur(l);
  std::function<void(int)> emit = [&](int i) {
    if (i == l) {
      keys.push_back(cur);
      return;
    }
    int parity = ((sc.grading[0].a2[i] % 2) + 2) % 2;
    int start = lo[i] + ((parity - lo[i]) % 2 + 2) % 2;
    for (int v = start; v <= hi[i]; v += 2) {
      cur[i] = v;
      emit(i + 1);
    }
  };
  emit(0);

  std::vector<ASlice> built(keys.size());
  parallelChunks(keys.size(), [&](std::size_t kLo, std::size_t kHi) {
    for (std::size_t ki = kLo; ki < kHi; ki++) {
      ASlice& slice = built[ki];
      buildSlice(sc, keys[ki], varsByComp, slice);
      if (slice.blocks.empty()) continue;

      // Walk blocks top M downward, carrying boundary vectors down.
      std::vector<BitVec> boundaryBelow;  // in next block's coordinates
      int prevM2 = 0;
      bool first = true;
      for (auto it = slice.blocks.rbegin(); it != slice.blocks.rend(); ++it) {
        HBlock& blk = it->second;
        if (!first && prevM2 != blk.m2 + 2) boundaryBelow.clear();  // gap: image lands in nothing
        first = false;
        prevM2 = blk.m2;

        // Boundary pivots from the block above.
        for (BitVec& v : boundaryBelow) {
          for (auto& p : blk.pivots)
            if (v.get(p.row)) v ^= p.vec;
          int low = v.lowestSet();
          if (low >= 0) blk.pivots.push_back({low, v, -1});
        }
        boundaryBelow.clear();

        // Kernel of this block's differential, tracking combinations.
        auto nextIt = std::next(it);
        HBlock* below =
            (nextIt != slice.blocks.rend() && nextIt->second.m2 == blk.m2 - 2) ? &nextIt->second
                                                                               : nullptr;
        std::size_t belowDim = below ? below->basis.size() : 0;
        std::vector<BitVec> kerPivots;
        std::vector<int> kerPivotRow;
        std::vector<BitVec> kerPivotCombo;
        std::vector<BitVec> cycles;
        for (std::size_t bi = 0; bi < blk.basis.size(); bi++) {
          BitVec v(belowDim);
          dCoords(sc, slice, blk, static_cast<int>(bi), below, v);
          BitVec combo(blk.basis.size());
          combo.flip(bi);
          for (std::size_t p = 0; p < kerPivots.size(); p++) {
            if (v.get(kerPivotRow[p])) {
              v ^= kerPivots[p];
              combo ^= kerPivotCombo[p];
            }
          }
          int low = v.lowestSet();
          if (low < 0) {
            cycles.push_back(combo);
          } else {
            kerPivots.push_back(v);
            kerPivotRow.push_back(low);
            kerPivotCombo.push_back(combo);
            boundaryBelow.push_back(kerPivots.back());  // spans the image below
          }
        }

        // Sift cycles through boundary pivots; survivors are representatives.
        for (BitVec& c : cycles) {
          BitVec w = c;
          for (auto& p : blk.pivots)
            if (w.get(p.row)) w ^= p.vec;
          int low = w.lowestSet();
          if (low < 0) continue;
          int repIdx = static_cast<int>(blk.reps.size());
          if (opt.keepReps) {
            Element rep;
            for (std::size_t bi = 0; bi < blk.basis.size(); bi++)
              if (w.get(bi)) rep.push(blk.basis[bi]);
            rep.normalize();
            blk.reps.push_back(std::move(rep));
          } else {
            blk.reps.emplace_back();
          }
          blk.pivots.push_back({low, w, repIdx});
        }
      }
    }
  });
  for (std::size_t ki = 0; ki < keys.size(); ki++) {
    if (built[ki].blocks.empty()) continue;
    bool any = false;
    for (auto& [m2, blk] : built[ki].blocks)
      if (!blk.basis.empty()) any = true;
    if (any) res.slices.emplace(keys[ki], std::move(built[ki]));
  }
  return res;
}

std::map<std::pair<GradingKey, int>, int> bruteHomology(const ChainComplex& c,
                                                        const HomologyOptions& opt) {
  SmallComplex full;
  full.parent = &c;
  full.coeff = c.coeff();
  full.numComponents = c.grid().numComponents;
  full.gens.resize(c.numGens());
  for (std::uint32_t i = 0; i < c.numGens(); i++) full.gens[i] = i;
  std::vector<std::int16_t> m2, a2flat;
  c.bulkGradings(m2, a2flat);
  int l = full.numComponents;
  full.grading.resize(c.numGens());
  for (std::uint32_t i = 0; i < c.numGens(); i++) {
    full.grading[i].m2 = m2[i];
    full.grading[i].a2.assign(a2flat.begin() + static_cast<std::size_t>(i) * l,
                              a2flat.begin() + static_cast<std::size_t>(i) * l + l);
  }
  full.d.resize(c.numGens());
  std::vector<std::pair<std::uint32_t, PolyF2>> col;
  for (std::uint32_t i = 0; i < c.numGens(); i++) {
    c.dColumn(i, col);
    for (auto& [y, p] : col) full.d[i].emplace_back(static_cast<int>(y), p);
  }
  HomologyOptions o = opt;
  o.keepReps = false;
  return homologyOf(full, MINUS, o).dims();
}

// --- induced maps ---------------------------------------------------------------------

namespace {

GradingKey shiftKey(const GradingKey& k, const Bigrading& s) {
  GradingKey r = k;
  for (std::size_t i = 0; i < r.size(); i++) r[i] += s.a2[i];
  return r;
}

Element denseToOrig(const SmallComplex& sc, const Element& e) {
  Element r;
  for (auto& t : e.terms()) r.push(Term{sc.gens[t.gen], t.mono});
  r.normalize();
  return r;
}

Element origToDense(const SmallComplex& sc, const Element& e) {
  Element r;
  for (auto& t : e.terms()) {
    int idx = sc.indexOf(t.gen);
    if (idx < 0) fail(Err::ValidationError, "projected element hits a cancelled generator");
    r.push(Term{static_cast<std::uint32_t>(idx), t.mono});
  }
  r.normalize();
  return r;
}

}  // namespace

InducedMap inducedOnHomology(const HomologyResult& h, const LinearMap& f, const Reduction& red) {
  if (!f.shiftKnown) fail(Err::GradingMismatch, "induced map needs a declared shift");
  if (f.src != h.sc->parent) fail(Err::ValidationError, "map not defined on the parent complex");
  InducedMap out;
  out.shift = f.shift;
  for (auto& [key, slice] : h.slices) {
    for (auto& [m2, blk] : slice.blocks) {
      if (blk.dim() == 0) continue;
      GradingKey tKey = shiftKey(key, f.shift);
      int tM2 = m2 + f.shift.m2;
      F2Matrix mat = F2Matrix::zero(h.dimAt(tKey, tM2), blk.dim());
      for (int j = 0; j < blk.dim(); j++) {
        Element image = red.projectApply(f.apply(red.includeApply(denseToOrig(*h.sc, blk.reps[j]))));
        BitVec cls = h.classOf(tKey, tM2, origToDense(*h.sc, image));
        for (std::size_t i = 0; i < cls.size(); i++)
          if (cls.get(i)) mat.col[j].flip(i);
      }
      out.blocks[{key, m2}] = std::move(mat);
    }
  }
  return out;
}

LaurentPoly InducedMap::rankPoly(int numT) const {
  LaurentPoly p(numT);
  for (auto& [km, mat] : blocks) {
    int r = mat.rank();
    if (!r) continue;
    LaurentPoly::Key key(1 + numT);
    key[0] = km.second;
    for (int i = 0; i < numT; i++) key[1 + i] = km.first[i];
    p.add(key, r);
  }
  return p;
}

InducedMap InducedMap::multiply(const InducedMap& rightFactor) const {
  InducedMap out;
  out.shift.m2 = shift.m2 + rightFactor.shift.m2;
  out.shift.a2.resize(shift.a2.size());
  for (std::size_t i = 0; i < shift.a2.size(); i++)
    out.shift.a2[i] = shift.a2[i] + rightFactor.shift.a2[i];
  for (auto& [km, rmat] : rightFactor.blocks) {
    GradingKey mid = shiftKey(km.first, rightFactor.shift);
    auto it = blocks.find({mid, km.second + rightFactor.shift.m2});
    if (it == blocks.end()) {
      // zero map out of the middle grading
      F2Matrix z = F2Matrix::zero(0, rmat.cols);
      out.blocks[km] = z;
      continue;
    }
    out.blocks[km] = it->second.multiply(rmat);
  }
  return out;
}

InducedMap InducedMap::add(const InducedMap& o) const {
  InducedMap out = *this;
  for (auto& [km, mat] : o.blocks) {
    auto it = out.blocks.find(km);
    if (it == out.blocks.end()) {
      out.blocks[km] = mat;
    } else if (it->second.rows == mat.rows && it->second.cols == mat.cols) {
      it->second = it->second.add(mat);
    } else if (mat.rows > 0 || mat.cols > 0) {
      // one side materialized a zero block with degenerate dimensions
      if (it->second.rows == 0 && it->second.cols == 0) it->second = mat;
    }
  }
  return out;
}

InducedMap InducedMap::addIdentity() const {
  InducedMap out = *this;
  for (auto& [km, mat] : out.blocks) {
    if (mat.rows != mat.cols) fail(Err::GradingMismatch, "identity needs square blocks");
    mat = mat.add(F2Matrix::identity(mat.rows));
  }
  return out;
}

bool InducedMap::isZero() const {
  for (auto& [km, mat] : blocks)
    if (!mat.isZero()) return false;
  return true;
}

bool InducedMap::isIdentity(const HomologyResult& h) const {
  for (auto& [km, dim] : h.dims()) {
    auto it = blocks.find(km);
    if (it == blocks.end()) return dim == 0;
    if (!it->second.isIdentity()) return false;
  }
  return true;
}

int homologyOfInduced(const HomologyResult& h, const InducedMap& f) {
  int total = 0;
  for (auto& [km, dim] : h.dims()) total += dim;
  int ranks = 0;
  for (auto& [km, mat] : f.blocks) ranks += mat.rank();
  return total - 2 * ranks;
}

int homologyOfInducedOnDiagonal(const HomologyResult& h, const InducedMap& f, int diag) {
  int total = 0;
  for (auto& [km, dim] : h.dims())
    if ((km.second - km.first[0]) / 2 == diag) total += dim;
  int ranks = 0;
  for (auto& [km, mat] : f.blocks)
    if ((km.second - km.first[0]) / 2 == diag) ranks += mat.rank();
  return total - 2 * ranks;
}

// --- hat invariants --------------------------------------------------------------------

HatData computeHat(const GridDiagram& g, bool keepLog, const BuildOptions& opt) {
  HatData hat;
  hat.complex = buildComplex(g, SIMPLY_BLOCKED, opt);
  ReduceOptions ro;
  ro.keepLog = keepLog;
  hat.reduction = reduce(*hat.complex, ro);
  const SmallComplex& sc = hat.reduction.reduced;

  int l = g.numComponents;
  GradingKey hi(l, 0), lo(l, 0);
  for (int i = 0; i < l; i++) {
    int mx = 0;
    for (auto& bg : sc.grading) mx = std::max(mx, std::abs(bg.a2[i]));
    hi[i] = mx;
    lo[i] = -mx - 2;  // margin slice, checked to vanish
  }
  HomologyOptions ho;
  ho.a2Lo = lo;
  ho.a2Hi = hi;
  hat.homology = homologyOf(sc, SIMPLY_BLOCKED, ho);
  hat.homology.flavor = SIMPLY_BLOCKED;
  for (auto& [km, dim] : hat.homology.dims()) {
    for (int i = 0; i < l; i++)
      if (km.first[i] <= lo[i] && dim > 0)
        fail(Err::ValidationError, "hat homology extends below the computed window");
  }
  hat.h = hat.homology.poincare();
  return hat;
}

LaurentPoly hatFromTilde(const GridDiagram& g, const BuildOptions& opt) {
  auto c = buildComplex(g, TILDE, opt);
  ReduceOptions ro;
  ro.keepLog = false;
  Reduction red = reduce(*c, ro);
  const SmallComplex& sc = red.reduced;
  for (auto& colv : sc.d)
    if (!colv.empty())
      fail(Err::ValidationError, "fully blocked reduction left differential entries");
  int l = g.numComponents;
  LaurentPoly tilde(l);
  for (std::size_t i = 0; i < sc.gens.size(); i++) {
    LaurentPoly::Key key(1 + l);
    key[0] = sc.grading[i].m2;
    for (int j = 0; j < l; j++) key[1 + j] = sc.grading[i].a2[j];
    tilde.add(key, 1);
  }
  LaurentPoly factor = LaurentPoly::constant(l, 1);
  for (int i = 0; i < l; i++) {
    LaurentPoly f(l);
    f.add(LaurentPoly::Key(1 + l, 0), 1);
    LaurentPoly::Key k(1 + l, 0);
    k[0] = -2;
    k[1 + i] = -2;
    f.add(k, 1);
    for (int p = 1; p < g.k[i]; p++) factor = factor * f;
  }
  return tilde.divideExact(factor);
}

LaurentPoly hflHatPoly(const GridDiagram& g, const BuildOptions& opt) {
  HatData hat = computeHat(g, /*keepLog=*/false, opt);
  LaurentPoly viaTilde = hatFromTilde(g, opt);
  if (!(hat.h == viaTilde))
    fail(Err::RoutesDisagree, "simply blocked route " + hat.h.str() +
                                  " != tilde route " + viaTilde.str());
  return hat.h;
}

InvolutionReport involutionFrom(const HatData& hat) {
  const GridDiagram& g = hat.complex->grid();
  if (g.numComponents != 1) fail(Err::ValidationError, "rank polynomial is defined for knots");
  InvolutionReport rep;
  rep.h = hat.h;
  MapPtr phi = phiI(*hat.complex, 0);
  MapPtr psi = psiI(*hat.complex, 0);
  InducedMap iPhi = inducedOnHomology(hat.homology, *phi, hat.reduction);
  InducedMap iPsi = inducedOnHomology(hat.homology, *psi, hat.reduction);
  InducedMap phiPsi = iPhi.multiply(iPsi);
  InducedMap psiPhi = iPsi.multiply(iPhi);
  rep.r = phiPsi.rankPoly(1);
  rep.phiPsiSquareZero = phiPsi.multiply(phiPsi).isZero();
  InducedMap inv = phiPsi.addIdentity();
  rep.involutionSquaresToId = inv.multiply(inv).isIdentity(hat.homology);
  rep.psiPhiEqualsPhiPsi = phiPsi.add(psiPhi).isZero();
  rep.rankBound = rep.r.doubledAtMost(rep.h);
  return rep;
}

InvolutionReport involutionRankPoly(const GridDiagram& g, const BuildOptions& opt) {
  HatData hat = computeHat(g, /*keepLog=*/true, opt);
  return involutionFrom(hat);
}

ThinReport thinSolve(const LaurentPoly& h, int signature) {
  ThinReport rep;
  bool haveS = false;
  Laurent1 hTilde;
  for (auto& [k, c] : h.terms()) {
    if (k.size() != 2) fail(Err::ValidationError, "thin analysis is for knots");
    if (k[0] % 2 || k[1] % 2) fail(Err::ValidationError, "half-integer knot grading");
    int m = k[0] / 2, a = k[1] / 2;
    if (!haveS) {
      rep.s = a - m;
      haveS = true;
    } else if (a - m != rep.s) {
      rep.thin = false;
      return rep;
    }
    hTilde[m] = c;
  }
  rep.thin = true;
  rep.hTilde = hTilde;
  rep.sigmaThin = (2 * rep.s == -signature);

  int loE = hTilde.empty() ? 0 : hTilde.begin()->first;
  int hiE = hTilde.empty() ? 0 : hTilde.rbegin()->first;
  int bound = (hiE - loE) / 2 + 1;
  Laurent1 square{{-1, 1}, {0, 2}, {1, 1}};
  for (int asc = 1; asc >= 0; asc--) {
    for (int m = 0; m <= bound; m++) {
      if (!asc && m == 0) continue;  // same ladder as ascending m=0
      Laurent1 ladder;
      for (int j = 0; j <= 2 * m; j++) ladder[asc ? j : -j] += 1;
      Laurent1 rem = laurent1Sub(hTilde, ladder);
      Laurent1 quot;
      if (!laurent1DivideExact(rem, square, quot)) continue;
      bool nonneg = true;
      for (auto& [e, c] : quot)
        if (c < 0) nonneg = false;
      if (!nonneg) continue;
      rep.rTilde = quot;
      rep.ladderM = m;
      rep.ladderAscending = asc;
      LaurentPoly r(1);
      for (auto& [e, c] : quot) r.add({2 * e, 2 * (e + rep.s)}, c);
      rep.r = r;
      return rep;
    }
  }
  fail(Err::NoDecomposition, "no ladder and square decomposition fits");
}

StructureReport structureChecks(const HatData& hat) {
  StructureReport rep;
  const GridDiagram& g = hat.complex->grid();
  if (g.numComponents != 1) fail(Err::ValidationError, "structure checks are for knots");
  MapPtr phi = phiI(*hat.complex, 0);
  MapPtr psi = psiI(*hat.complex, 0);
  InducedMap iPhi = inducedOnHomology(hat.homology, *phi, hat.reduction);
  InducedMap iPsi = inducedOnHomology(hat.homology, *psi, hat.reduction);
  rep.dimHPhi = homologyOfInduced(hat.homology, iPhi);
  rep.dimHPsi = homologyOfInduced(hat.homology, iPsi);
  std::set<int> diags;
  for (auto& [km, dim] : hat.homology.dims()) diags.insert((km.second - km.first[0]) / 2);
  for (int d : diags) rep.dimHPhiByDiagonal[d] = homologyOfInducedOnDiagonal(hat.homology, iPhi, d);
  return rep;
}

AlexanderCheckResult alexanderCheck(const LaurentPoly& h, const std::vector<long long>& delta) {
  AlexanderCheckResult res;
  if (delta.empty() || delta.size() % 2 == 0) return res;
  LaurentPoly e = h.evalQminus1();
  int half = (static_cast<int>(delta.size()) - 1) / 2;
  LaurentPoly want(1);
  for (std::size_t i = 0; i < delta.size(); i++)
    want.add({0, 2 * (static_cast<int>(i) - half)}, delta[i]);
  if (e == want) {
    res.matches = true;
    res.sign = 1;
  } else if (e == (LaurentPoly(1) - want)) {
    res.matches = true;
    res.sign = -1;
  }
  return res;
}

std::vector<long long> alexanderFromWinding(const GridDiagram& g) {
  if (g.numComponents != 1)
    fail(Err::ValidationError, "winding-number determinant oracle is for knots");
  int n = g.n;
  std::vector<std::vector<int>> wn(n, std::vector<int>(n, 0));
  for (int c = 0; c < n; c++)
    for (int r = 0; r < n; r++)
      for (int j = 0; j < c; j++) {
        if (g.xRow[j] >= r && g.oRow[j] < r) wn[c][r]++;
        if (g.oRow[j] >= r && g.xRow[j] < r) wn[c][r]--;
      }
  // det of [t^{-wn(c,r)}] over all permutations, assigning rows to columns.
  Laurent1 det;
  std::vector<std::uint8_t> used(n, 0);
  std::function<void(int, int, int)> rec = [&](int c, int exp, int inv) {
    if (c == n) {
      det[exp] += (inv % 2 == 0) ? 1 : -1;
      if (det[exp] == 0) det.erase(exp);
      return;
    }
    for (int r = 0; r < n; r++) {
      if (used[r]) continue;
      int invAdd = 0;
      for (int r2 = r + 1; r2 < n; r2++)
        if (used[r2]) invAdd++;
      used[r] = 1;
      rec(c + 1, exp - wn[c][r], inv + invAdd);
      used[r] = 0;
    }
  };
  rec(0, 0, 0);
  if (det.empty()) fail(Err::ValidationError, "winding determinant vanished");
  Laurent1 denom{{0, 1}, {1, -1}};  // 1 - t
  Laurent1 quot = det;
  for (int i = 0; i + 1 < n; i++) {
    Laurent1 q;
    if (!laurent1DivideExact(quot, denom, q))
      fail(Err::ValidationError, "determinant not divisible by (1-t)^(n-1)");
    quot = q;
  }
  int lo = quot.begin()->first, hi = quot.rbegin()->first;
  if ((lo + hi) % 2 != 0) fail(Err::ValidationError, "determinant support not symmetric");
  int center = (lo + hi) / 2;
  long long atOne = 0;
  for (auto& [e, c] : quot) atOne += c;
  if (atOne != 1 && atOne != -1) fail(Err::ValidationError, "Delta(1) is not a unit");
  std::vector<long long> out;
  for (int e = lo; e <= hi; e++) {
    long long c = quot.count(e) ? quot[e] : 0;
    out.push_back(atOne < 0 ? -c : c);
  }
  (void)center;
  return out;
}

}  // namespace gridfloer
