#include "gridfloer/maps.hpp"

namespace gridfloer {

namespace {

Bigrading makeShift(const ChainComplex& c, int m2, int comp, int a2comp) {
  Bigrading s;
  s.m2 = m2;
  s.a2.assign(c.grid().numComponents, 0);
  if (comp >= 0) s.a2[comp] = a2comp;
  return s;
}

void checkMarking(const ChainComplex& c, int comp, int j) {
  const GridDiagram& g = c.grid();
  if (comp < 0 || comp >= g.numComponents || j < 0 || j >= g.k[comp])
    fail(Err::IndexOutOfRange, "marking index out of range");
}

}  // namespace

MapPtr psiIJ(const ChainComplex& c, int comp, int j) {
  checkMarking(c, comp, j);
  const GridDiagram& g = c.grid();
  int zc = g.zColOf(comp, j);
  auto m = moduleMap(
      c, c, "Psi_" + std::to_string(comp + 1) + "," + std::to_string(j + 1),
      makeShift(c, -2, comp, -2), [&c, zc](std::uint32_t gen) {
        const GridDiagram& gg = c.grid();
        State x = stateUnrank(gg.n, gen);
        Element r;
        forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
          if (countX(gg, rect) != 1 || !coversX(gg, rect, zc)) return;
          r.push(Term{stateRank(y), oWeight(gg, rect)});
        });
        r.normalize();
        return r;
      });
  return m;
}

MapPtr phiIJ(const ChainComplex& c, int comp, int j) {
  checkMarking(c, comp, j);
  const GridDiagram& g = c.grid();
  int wc = g.wColOf(comp, j);
  auto m = moduleMap(
      c, c, "Phi_" + std::to_string(comp + 1) + "," + std::to_string(j + 1),
      makeShift(c, 2, comp, 2), [&c, wc](std::uint32_t gen) {
        const GridDiagram& gg = c.grid();
        State x = stateUnrank(gg.n, gen);
        Element r;
        forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
          if (countX(gg, rect) != 0 || !coversO(gg, rect, wc)) return;
          r.push(Term{stateRank(y), oWeight(gg, rect) / Mono::var(wc)});
        });
        r.normalize();
        return r;
      });
  return m;
}

MapPtr psiI(const ChainComplex& c, int comp) {
  std::vector<MapPtr> parts;
  for (int j = 0; j < c.grid().k[comp]; j++) parts.push_back(psiIJ(c, comp, j));
  auto m = sum(std::move(parts));
  return m;
}

MapPtr phiI(const ChainComplex& c, int comp) { return phiIJ(c, comp, c.grid().special[comp]); }

MapPtr involutionMap(const ChainComplex& c, int comp, bool psiOutside) {
  MapPtr psi = psiI(c, comp);
  MapPtr phi = phiI(c, comp);
  MapPtr prod = psiOutside ? compose(psi, phi) : compose(phi, psi);
  return sum({identityMap(c), prod});
}

HomotopyTriple homotopyLemmaMaps(const ChainComplex& c, int comp) {
  const GridDiagram& g = c.grid();
  int sVar = g.specialVar(comp);
  HomotopyTriple t;
  t.h1 = moduleMap(c, c, "H1_" + std::to_string(comp + 1), makeShift(c, 2, comp, 0),
                   [&c, comp, sVar](std::uint32_t gen) {
                     const GridDiagram& gg = c.grid();
                     State x = stateUnrank(gg.n, gen);
                     Element r;
                     forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
                       if (countX(gg, rect) != 1 || countXComp(gg, rect, comp) != 1) return;
                       if (!coversO(gg, rect, sVar)) return;
                       r.push(Term{stateRank(y), oWeight(gg, rect) / Mono::var(sVar)});
                     });
                     r.normalize();
                     return r;
                   });
  t.h2 = moduleMap(c, c, "H2_" + std::to_string(comp + 1), makeShift(c, -2, comp, -4),
                   [&c, comp](std::uint32_t gen) {
                     const GridDiagram& gg = c.grid();
                     State x = stateUnrank(gg.n, gen);
                     Element r;
                     forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
                       if (countX(gg, rect) != 2 || countXComp(gg, rect, comp) != 2) return;
                       r.push(Term{stateRank(y), oWeight(gg, rect)});
                     });
                     r.normalize();
                     return r;
                   });
  // A rectangle meets each O at most once, so the binomial weight vanishes.
  t.h3 = zeroMap(c);
  return t;
}

namespace {

class TrivialityMap final : public LinearMap {
 public:
  int comp = 0, sVar = 0;
  Element applyTerm(const Term& t) const override {
    int m = t.mono.exponent(sVar);
    if (m % 2 == 0) return Element();
    Mono rest = t.mono / Mono::var(sVar);  // one power consumed
    const GridDiagram& gg = src->grid();
    State x = stateUnrank(gg.n, t.gen);
    Element r;
    forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
      if (countX(gg, rect) != 1 || countXComp(gg, rect, comp) != 1) return;
      r.push(Term{stateRank(y), oWeight(gg, rect) * rest});
    });
    r.normalize();
    return r.reduceMod(dst->coeff().killedMask);
  }
};

class SubstMap final : public LinearMap {
 public:
  int fromVar = 0, toVar = 0;
  Element applyTerm(const Term& t) const override {
    Element e(Term{t.gen, t.mono.relabel(fromVar, toVar)});
    return e.reduceMod(dst->coeff().killedMask);
  }
};

class GeomKMap final : public LinearMap {
 public:
  int fromVar = 0, toVar = 0;
  Element applyTerm(const Term& t) const override {
    int m = t.mono.exponent(fromVar);
    if (m == 0) return Element();
    Mono rest = t.mono / Mono::var(fromVar, m);
    Element r;
    r.pushScaled(t.gen, geometricSum(fromVar, toVar, m), rest);
    r.normalize();
    return r.reduceMod(dst->coeff().killedMask);
  }
};

}  // namespace

MapPtr trivialityHomotopy(const ChainComplex& c, int comp) {
  auto m = std::make_shared<TrivialityMap>();
  m->src = m->dst = &c;
  m->comp = comp;
  m->sVar = c.grid().specialVar(comp);
  m->name = "Htriv_" + std::to_string(comp + 1);
  m->shift = makeShift(c, 2, comp, 0);
  m->shiftKnown = true;
  m->equivariantMask = ~0u ^ (1u << m->sVar);
  return m;
}

MapPtr substMap(const ChainComplex& src, const ChainComplex& dst, int fromVar, int toVar) {
  if (fromVar == toVar) fail(Err::SameIndex, "relabeler needs distinct variables");
  auto m = std::make_shared<SubstMap>();
  m->src = &src;
  m->dst = &dst;
  m->fromVar = fromVar;
  m->toVar = toVar;
  m->name = "c[U" + std::to_string(fromVar) + "->U" + std::to_string(toVar) + "]";
  m->shift = makeShift(src, 0, -1, 0);
  m->shiftKnown = true;
  m->equivariantMask = ~0u ^ (1u << fromVar);
  return m;
}

MapPtr geomKMap(const ChainComplex& src, const ChainComplex& dst, int fromVar, int toVar) {
  if (fromVar == toVar) fail(Err::SameIndex, "K needs distinct variables");
  auto m = std::make_shared<GeomKMap>();
  m->src = &src;
  m->dst = &dst;
  m->fromVar = fromVar;
  m->toVar = toVar;
  m->name = "K[U" + std::to_string(fromVar) + "->U" + std::to_string(toVar) + "]";
  int comp = src.grid().wLab[fromVar].comp;
  m->shift = makeShift(src, 4, comp, 2);
  m->shiftKnown = true;
  m->equivariantMask = ~0u ^ (1u << fromVar);
  return m;
}

ChangeSpecial changeSpecialMaps(const ChainComplex& c, int comp, int j, int jp) {
  const GridDiagram& g = c.grid();
  checkMarking(c, comp, j);
  checkMarking(c, comp, jp);
  if (j == jp) fail(Err::SameIndex, "change of special marking needs j != j'");
  if (g.k[comp] < 2) fail(Err::ComponentTooSmall, "component needs at least two markings");
  // The arc walk below relies on the canonical numbering of parsed diagrams.
  for (int m = 0; m < g.k[comp]; m++)
    if (g.bBij(comp, m) != m) fail(Err::ValidationError, "diagram is not canonically numbered");

  ChangeSpecial cs;
  for (int idx = j; idx != jp; idx = (idx + 1) % g.k[comp]) cs.J.push_back(idx);

  int fromVar = g.varOf(comp, j), toVar = g.varOf(comp, jp);
  cs.relabel = substMap(c, c, fromVar, toVar);
  cs.K = geomKMap(c, c, fromVar, toVar);
  std::vector<MapPtr> psis;
  for (int idx : cs.J) psis.push_back(psiIJ(c, comp, idx));
  cs.f = compose(cs.relabel, compose(phiIJ(c, comp, j), sum(std::move(psis))));
  return cs;
}

MapPtr wrapHomotopy(const ChainComplex& c, int comp, int wIdx) {
  const GridDiagram& g = c.grid();
  checkMarking(c, comp, wIdx);
  if (g.k[comp] < 2) fail(Err::ComponentTooSmall, "wrap homotopy needs k > 1");
  int wVar = g.varOf(comp, wIdx);
  int zPrev = (wIdx + g.k[comp] - 1) % g.k[comp];
  int zc = g.zColOf(comp, zPrev);
  return moduleMap(c, c, "Hwrap_" + std::to_string(comp + 1), makeShift(c, 2, comp, 0),
                   [&c, wVar, zc](std::uint32_t gen) {
                     const GridDiagram& gg = c.grid();
                     State x = stateUnrank(gg.n, gen);
                     Element r;
                     forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
                       if (!coversO(gg, rect, wVar)) return;
                       if (countX(gg, rect) != 1 || !coversX(gg, rect, zc)) return;
                       r.push(Term{stateRank(y), oWeight(gg, rect) / Mono::var(wVar)});
                     });
                     r.normalize();
                     return r;
                   });
}

MapPtr columnPassHomotopy(const ChainComplex& c, int comp, int j) {
  const GridDiagram& g = c.grid();
  checkMarking(c, comp, j);
  int wVar = g.varOf(comp, j);
  int zc = g.zColOf(comp, j);
  return moduleMap(c, c, "Hpass_" + std::to_string(comp + 1) + "," + std::to_string(j + 1),
                   makeShift(c, 2, comp, 0), [&c, wVar, zc](std::uint32_t gen) {
                     const GridDiagram& gg = c.grid();
                     int n = gg.n;
                     State x = stateUnrank(n, gen);
                     Element r;
                     forEachEmptyRectangle(gg, x, [&](const Rectangle& rect, const State& y) {
                       if (!coversO(gg, rect, wVar)) return;
                       if (countX(gg, rect) != 1 || !coversX(gg, rect, zc)) return;
                       int zOff = (gg.xRow[zc] - rect.rowStart + n) % n;
                       int wOff = (gg.oRow[wVar] - rect.rowStart + n) % n;
                       if (zOff <= wOff) return;  // z must sit north of w inside the rectangle
                       r.push(Term{stateRank(y), oWeight(gg, rect) / Mono::var(wVar)});
                     });
                     r.normalize();
                     return r;
                   });
}

}  // namespace gridfloer
