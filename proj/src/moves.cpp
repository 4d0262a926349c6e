#include "gridfloer/moves.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace gridfloer {

namespace {

BuildOptions plumbing() {
  BuildOptions o;
  o.d2Check = BuildOptions::OFF;  // move maps are validated by chain-map tests
  return o;
}

Bigrading zeroShift(const GridDiagram& g) {
  Bigrading s;
  s.a2.assign(g.numComponents, 0);
  return s;
}

Mono remapVars(Mono m, const std::vector<int>& newVar) {
  Mono out;
  for (std::size_t v = 0; v < newVar.size(); v++) {
    int e = m.exponent(static_cast<int>(v));
    if (e) out = out * Mono::var(newVar[v], e);
  }
  return out;
}

}  // namespace

std::string Move::str() const {
  std::ostringstream os;
  switch (kind) {
    case HCommute: os << "hcommute " << r; break;
    case VCommute: os << "vcommute " << c; break;
    case Stabilize: os << "stabilize " << r << " " << c << " ne"; break;
    case Destabilize: os << "destabilize " << c << " " << r << " se"; break;
    case Renumber: {
      os << "renumber " << comp + 1 << " w=(";
      for (std::size_t i = 0; i < sigma.size(); i++) os << (i ? " " : "") << sigma[i] + 1;
      os << ") z=(";
      for (std::size_t i = 0; i < tau.size(); i++) os << (i ? " " : "") << tau[i] + 1;
      os << ")";
      break;
    }
    case RelabelTorus: os << "relabel " << dc << " " << dr; break;
  }
  return os.str();
}

// --- commutation -------------------------------------------------------------------

namespace {

struct CommuteGeom {
  int n = 0, r = 0;
  int cross4[2] = {0, 0};  // crossing positions in quarter-column units, cross4[0] < cross4[1]
  bool lowArcIsL[2] = {false, false};  // side of the arc starting just east of cross4[i]
};

// Marking columns of the two rows, as cyclic points 4c+2; crossings sit at
// 4c+3 east of the last marking of a group.
bool commuteGeometry(const GridDiagram& g, int r, CommuteGeom& geom) {
  int n = g.n;
  int lz = g.xCol[r], lw = g.oCol[r];
  int uz = g.xCol[r + 1], uw = g.oCol[r + 1];
  int cols[4] = {lz, lw, uz, uw};
  bool isL[4] = {true, true, false, false};
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++)
      if (cols[i] == cols[j]) return false;
  // sort cyclically by column
  int idx[4] = {0, 1, 2, 3};
  std::sort(idx, idx + 4, [&](int a, int b) { return cols[a] < cols[b]; });
  // group membership must be contiguous on the circle
  int changes = 0;
  for (int i = 0; i < 4; i++)
    if (isL[idx[i]] != isL[idx[(i + 1) % 4]]) changes++;
  if (changes != 2) return false;
  geom.n = n;
  geom.r = r;
  int found = 0;
  for (int i = 0; i < 4; i++) {
    int a = idx[i], b = idx[(i + 1) % 4];
    if (isL[a] != isL[b]) {
      geom.cross4[found] = 4 * cols[a] + 3;
      geom.lowArcIsL[found] = isL[b];  // the arc east of this crossing holds b's group
      found++;
    }
  }
  if (geom.cross4[0] > geom.cross4[1]) {
    std::swap(geom.cross4[0], geom.cross4[1]);
    std::swap(geom.lowArcIsL[0], geom.lowArcIsL[1]);
  }
  return true;
}

// Is the arc starting strictly east of crossing `which` (up to the other
// crossing) the arc of the lower row's markings?
bool sideIsL(const CommuteGeom& geom, int q4) {
  int span0 = (q4 - geom.cross4[0] + 4 * geom.n) % (4 * geom.n);
  int span01 = geom.cross4[1] - geom.cross4[0];
  return (span0 < span01) ? geom.lowArcIsL[0] : geom.lowArcIsL[1];
}

struct PentagonTerm {
  std::uint32_t y;
  Mono weight;
  int nz;
};

// Pentagons out of x with vertex at the chosen crossing.  Each candidate is
// a torus rectangle joining x to x o swap(a0, c') whose edge at the moved
// circle is corrected by the strip between the old and the new circle.
void pentagonTerms(const GridDiagram& g, const CommuteGeom& geom, int crossing, const State& x,
                   std::vector<PentagonTerm>& out) {
  out.clear();
  int n = g.n, r = geom.r;
  int rho4 = geom.cross4[crossing];
  int other4 = geom.cross4[1 - crossing];
  int Q = 4 * n;
  int a0 = -1;
  for (int c = 0; c < n; c++)
    if (x[c] == r + 1) a0 = c;
  assert(a0 >= 0);

  int lz = g.xCol[r], lw = g.oCol[r];
  int uz = g.xCol[r + 1], uw = g.oCol[r + 1];
  auto inOpenSpan = [Q](int q4, int start4, int len4) {
    int d = (q4 - start4 + Q) % Q;
    return d > 0 && d < len4;
  };

  // Thin pentagon: the sliver between the circles from x's coordinate on the
  // moved circle to the crossing, on whichever side avoids the other
  // crossing.
  {
    bool east = !inOpenSpan(other4, 4 * a0, (rho4 - 4 * a0 + Q) % Q);
    int start4 = east ? 4 * a0 : rho4;
    int len4 = east ? (rho4 - 4 * a0 + Q) % Q : (4 * a0 - rho4 + Q) % Q;
    bool sideL = sideIsL(geom, (start4 + 1) % Q);
    int nz = 0;
    Mono w;
    int zc = sideL ? lz : uz, wc = sideL ? lw : uw;
    if (inOpenSpan(4 * zc + 2, start4, len4)) nz++;
    if (inOpenSpan(4 * wc + 2, start4, len4)) w = w * Mono::var(wc);
    out.push_back(PentagonTerm{stateRank(x), w, nz});
  }

  State y = x;
  for (int cp = 0; cp < n; cp++) {
    if (cp == a0) continue;
    std::swap(y[a0], y[cp]);
    int k = x[cp];
    for (int variant = 0; variant < 2; variant++) {
      // variant 0: x-corner on the moved circle is the west corner
      int colStart = variant == 0 ? a0 : cp;
      int colLen = variant == 0 ? (cp - a0 + n) % n : (a0 - cp + n) % n;
      int rowStart = variant == 0 ? r + 1 : k;
      int rowLen = variant == 0 ? (k - (r + 1) + n) % n : (r + 1 - k + n) % n;
      int dp = (rho4 - 4 * colStart + Q) % Q;
      if (dp <= 0 || dp >= 4 * colLen) continue;
      // the new-circle portion of the edge must stay on one arc
      int newLo = variant == 0 ? dp : 0;
      int newHi = variant == 0 ? 4 * colLen : dp;
      int dOther = (other4 - 4 * colStart + Q) % Q;
      if (dOther > newLo && dOther < newHi) continue;

      Rectangle rect;
      rect.colStart = colStart;
      rect.colLen = colLen;
      rect.rowStart = rowStart;
      rect.rowLen = rowLen;
      rect.cFrom = a0;
      rect.cTo = cp;
      if (!rectangleEmpty(g, x, rect)) continue;

      int nz = countX(g, rect);
      Mono w = oWeight(g, rect);
      // strip correction along the new-circle portion
      int stripStart4 = variant == 0 ? rho4 : 4 * colStart;
      int stripLen4 = variant == 0 ? 4 * colLen - dp : dp;
      bool sideL = sideIsL(geom, (stripStart4 + 1) % Q);
      bool add = (variant == 0) ? sideL : !sideL;  // dip on the bottom edge, bulge on the top
      int zc = sideL ? lz : uz, wc = sideL ? lw : uw;
      if (inOpenSpan(4 * zc + 2, stripStart4, stripLen4)) nz += add ? 1 : -1;
      if (inOpenSpan(4 * wc + 2, stripStart4, stripLen4)) {
        if (add) {
          w = w * Mono::var(wc);
        } else {
          w = w / Mono::var(wc);
        }
      }
      out.push_back(PentagonTerm{stateRank(y), w, nz});
    }
    std::swap(y[a0], y[cp]);
  }
}

GridDiagram swappedRows(const GridDiagram& g, int r) {
  GridDiagram t = g;
  for (int c = 0; c < g.n; c++) {
    if (t.xRow[c] == r) t.xRow[c] = r + 1;
    else if (t.xRow[c] == r + 1) t.xRow[c] = r;
    if (t.oRow[c] == r) t.oRow[c] = r + 1;
    else if (t.oRow[c] == r + 1) t.oRow[c] = r;
  }
  for (int c = 0; c < g.n; c++) {
    t.xCol[t.xRow[c]] = c;
    t.oCol[t.oRow[c]] = c;
  }
  return t;
}

}  // namespace

bool rowsCommutable(const GridDiagram& g, int r) {
  if (r < 0 || r > g.n - 2) return false;
  CommuteGeom geom;
  return commuteGeometry(g, r, geom);
}

bool colsCommutable(const GridDiagram& g, int c) {
  return rowsCommutable(transposeGrid(g), c);
}

MoveResult commuteRows(const GridDiagram& g, int r, int crossing) {
  CommuteGeom geom;
  if (r < 0 || r > g.n - 2 || !commuteGeometry(g, r, geom))
    fail(Err::NotCommutable, "rows " + std::to_string(r) + "," + std::to_string(r + 1));
  MoveResult res;
  res.move = Move{Move::HCommute, r, 0, crossing};
  res.to = swappedRows(g, r);
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(res.to, MINUS, plumbing());
  const ChainComplex& src = *res.srcComplex;
  const ChainComplex& dst = *res.dstComplex;
  GridDiagram gc = g;
  res.map = moduleMap(src, dst, "hcommute" + std::to_string(r), zeroShift(g),
                      [gc, geom, crossing](std::uint32_t gen) {
                        State x = stateUnrank(gc.n, gen);
                        std::vector<PentagonTerm> terms;
                        pentagonTerms(gc, geom, crossing, x, terms);
                        Element e;
                        for (auto& t : terms)
                          if (t.nz == 0) e.push(Term{t.y, t.weight});
                        e.normalize();
                        return e;
                      });
  return res;
}

MoveResult commuteCols(const GridDiagram& g, int c, int crossing) {
  GridDiagram gt = transposeGrid(g);
  CommuteGeom geom;
  if (c < 0 || c > g.n - 2 || !commuteGeometry(gt, c, geom))
    fail(Err::NotCommutable, "columns " + std::to_string(c) + "," + std::to_string(c + 1));
  MoveResult res;
  res.move = Move{Move::VCommute, 0, c, crossing};
  GridDiagram toT = swappedRows(gt, c);
  res.to = transposeGrid(toT);
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(res.to, MINUS, plumbing());
  // Work in the transposed picture: states transpose to inverse permutations
  // and the U variables are renamed through the O-marking columns.
  std::vector<int> varBack(g.n);  // transposed-grid variable -> original variable
  for (int v = 0; v < g.n; v++) varBack[v] = gt.oRow[v];
  GridDiagram gtCopy = gt;
  int n = g.n;
  res.map = moduleMap(*res.srcComplex, *res.dstComplex, "vcommute" + std::to_string(c),
                      zeroShift(g), [gtCopy, geom, crossing, varBack, n](std::uint32_t gen) {
                        State x = stateUnrank(n, gen);
                        State xt(n);
                        for (int i = 0; i < n; i++) xt[x[i]] = static_cast<std::uint8_t>(i);
                        std::vector<PentagonTerm> terms;
                        pentagonTerms(gtCopy, geom, crossing, xt, terms);
                        Element e;
                        for (auto& t : terms) {
                          if (t.nz != 0) continue;
                          State yt = stateUnrank(n, t.y);
                          State y(n);
                          for (int i = 0; i < n; i++) y[yt[i]] = static_cast<std::uint8_t>(i);
                          e.push(Term{stateRank(y), remapVars(t.weight, varBack)});
                        }
                        e.normalize();
                        return e;
                      });
  return res;
}

// --- positive-domain enumeration ----------------------------------------------------

std::vector<Domain2Chain> enumeratePositiveDomains(const GridDiagram& g, const State& x,
                                                   const State& y, int maxCoeff) {
  int n = g.n;
  std::vector<Domain2Chain> found;
  Domain2Chain d;
  d.n = n;
  d.coeff.assign(n * n, 0);
  auto want = [&](int c, int r) {
    return (x[c] == r ? 1 : 0) - (y[c] == r ? 1 : 0);
  };
  // Cells of row 0 and the first cell of each row are free; the corner
  // condition at interior lattice points determines the rest.
  std::function<void(int)> fillRow = [&](int r) {
    if (r == n) {
      for (int c = 0; c < n; c++) {
        int cm = (c + n - 1) % n;
        int defect = d.at(c, 0) - d.at(cm, 0) - d.at(c, n - 1) + d.at(cm, n - 1);
        if (defect != want(c, 0)) return;
      }
      found.push_back(d);
      return;
    }
    for (int seed = 0; seed <= maxCoeff; seed++) {
      d.at(0, r) = seed;
      bool ok = true;
      for (int c = 1; c < n && ok; c++) {
        int v = want(c, r) + d.at(c - 1, r) + d.at(c, r - 1) - d.at(c - 1, r - 1);
        if (v < 0 || v > maxCoeff) ok = false;
        else d.at(c, r) = v;
      }
      if (ok) {
        int defect = d.at(0, r) - d.at(n - 1, r) - d.at(0, r - 1) + d.at(n - 1, r - 1);
        if (defect == want(0, r)) fillRow(r + 1);
      }
    }
    d.at(0, r) = 0;
  };
  std::function<void(int)> fillRow0 = [&](int c) {
    if (c == n) {
      fillRow(1);
      return;
    }
    for (int v = 0; v <= maxCoeff; v++) {
      d.at(c, 0) = v;
      fillRow0(c + 1);
    }
    d.at(c, 0) = 0;
  };
  fillRow0(0);
  return found;
}

namespace {

bool snailCommon(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y,
                 int pc, int pr) {
  int n = g.n;
  if (!domainJoins(g, d, x, y)) return false;
  for (int c = 0; c < n; c++) {
    for (int pass = 0; pass < 2; pass++) {
      int r = pass == 0 ? x[c] : y[c];
      if (c == pc && r == pr) continue;
      int cm = (c + n - 1) % n, rm = (r + n - 1) % n;
      int sum = d.at(c, r) + d.at(cm, r) + d.at(c, rm) + d.at(cm, rm);
      if (sum > 1) return false;
    }
  }
  return true;
}

#include "snail_spiral.inc"

}  // namespace

bool isSnailNE(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y,
               int pc, int pr, int& mOut) {
  if (x[pc] != pr) return false;
  if (!snailPattern(d, g.n, pc, pr, SnailDir::NE, mOut)) return false;
  return snailCommon(g, d, x, y, pc, pr);
}

bool isSnailSE(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y,
               int pc, int pr, int& mOut) {
  if (y[pc] != pr) return false;
  if (!snailPattern(d, g.n, pc, pr, SnailDir::SE, mOut)) return false;
  return snailCommon(g, d, x, y, pc, pr);
}

// --- stabilization / destabilization ---------------------------------------------------

namespace {

// `want` with a kink pair spliced into column gamma at row level delta: the
// split keeps the X of the old column on the left, its O on the right, and
// the pair [w | z] occupies the inserted row.  Inverse of destabilizeSE.
GridDiagram kinkInsert(const GridDiagram& want, int comp, int gamma, int delta) {
  int n = want.n;
  GridDiagram t;
  t.n = n + 1;
  t.xRow.assign(n + 1, 0);
  t.oRow.assign(n + 1, 0);
  t.zLab.assign(n + 1, MarkLabel{});
  t.wLab.assign(n + 1, MarkLabel{});
  t.numComponents = want.numComponents;
  t.k = want.k;
  t.special = want.special;
  auto mc = [gamma](int c) { return c + (c > gamma ? 1 : 0); };
  auto mr = [delta](int r) { return r + (r >= delta ? 1 : 0); };
  for (int c = 0; c < n; c++) {
    int xc = (c == gamma) ? gamma : mc(c);
    int oc = (c == gamma) ? gamma + 1 : mc(c);
    t.xRow[xc] = mr(want.xRow[c]);
    t.zLab[xc] = want.zLab[c];
    t.oRow[oc] = mr(want.oRow[c]);
    t.wLab[oc] = want.wLab[c];
  }
  t.oRow[gamma] = delta;
  t.wLab[gamma] = MarkLabel{comp, want.k[comp]};
  t.xRow[gamma + 1] = delta;
  t.zLab[gamma + 1] = MarkLabel{comp, want.k[comp]};
  t.k[comp]++;
  t.xCol.assign(n + 1, 0);
  t.oCol.assign(n + 1, 0);
  for (int c = 0; c <= n; c++) {
    t.xCol[t.xRow[c]] = c;
    t.oCol[t.oRow[c]] = c;
  }
  t.validate();
  return t;
}

}  // namespace

MoveResult stabilizeSE(const GridDiagram& g, int comp, int gamma, int delta) {
  if (g.n + 1 > Mono::kMaxVars) fail(Err::TooLarge, "stabilized grid exceeds supported index");
  if (gamma < 0 || gamma >= g.n || delta < 0 || delta >= g.n)
    fail(Err::BadPlacement, "kink site out of range");
  if (g.wLab[gamma].comp != comp) fail(Err::BadPlacement, "kink column is not on the component");
  GridDiagram t = kinkInsert(g, comp, gamma, delta);
  MoveResult res;
  res.move = Move{Move::Stabilize, delta, gamma};
  res.to = t;
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(t, MINUS, plumbing());
  int n = g.n;
  int pc = gamma + 1, pr = delta + 1;
  int newWCol = gamma;
  GridDiagram big = t;
  res.map = moduleMap(*res.srcComplex, *res.dstComplex, "stabilize-se", zeroShift(g),
                      [big, n, gamma, delta, pc, pr, newWCol](std::uint32_t gen) {
                        State x = stateUnrank(n, gen);
                        State ix(n + 1);
                        for (int c = 0; c < n; c++) {
                          int nc = c + (c > gamma ? 1 : 0);
                          int nh = x[c] + (x[c] > delta ? 1 : 0);
                          ix[nc] = static_cast<std::uint8_t>(nh);
                        }
                        ix[pc] = static_cast<std::uint8_t>(pr);
                        Element e;
                        snailTermsNE(big, ix, pc, pr, [&](const State& y, int nz, int nzStar,
                                                          Mono w) {
                          if (nz != nzStar) return;
                          e.push(Term{stateRank(y), w / Mono::var(newWCol, w.exponent(newWCol))});
                        });
                        e.normalize();
                        return e;
                      });
  return res;
}

MoveResult stabilizeNE(const GridDiagram& g, int r0, int c0) {
  int n = g.n;
  if (r0 < 0 || r0 >= n || c0 < 0 || c0 >= n) fail(Err::BadPlacement, "split cell out of range");
  if (n + 1 > Mono::kMaxVars) fail(Err::TooLarge, "stabilized grid exceeds supported index");
  int comp = g.zLab[g.xCol[r0]].comp;
  if (g.wLab[g.oCol[r0]].comp != comp) fail(Err::TraceFailure, "row markings straddle components");

  auto mapCol = [c0](int c) { return c + (c > c0 ? 1 : 0); };
  auto mapRow = [r0](int r) { return r + (r > r0 ? 1 : 0); };
  GridDiagram t;
  t.n = n + 1;
  t.xRow.assign(n + 1, 0);
  t.oRow.assign(n + 1, 0);
  t.zLab.assign(n + 1, MarkLabel{});
  t.wLab.assign(n + 1, MarkLabel{});
  t.numComponents = g.numComponents;
  t.k = g.k;
  t.special = g.special;
  for (int c = 0; c < n; c++) {
    int xr = g.xRow[c], orow = g.oRow[c];
    int nxr = (xr == r0) ? r0 + 1 : mapRow(xr);  // the split row's X goes up
    int nor = (orow == r0) ? r0 : mapRow(orow);  // its O stays down
    t.xRow[mapCol(c)] = nxr;
    t.oRow[mapCol(c)] = nor;
    t.zLab[mapCol(c)] = g.zLab[c];
    t.wLab[mapCol(c)] = g.wLab[c];
  }
  t.xRow[c0 + 1] = r0;      // new X southeast of the crossing
  t.oRow[c0 + 1] = r0 + 1;  // new O northeast of the crossing
  t.zLab[c0 + 1] = MarkLabel{comp, g.k[comp]};
  t.wLab[c0 + 1] = MarkLabel{comp, g.k[comp]};
  t.k[comp]++;
  t.xCol.assign(n + 1, 0);
  t.oCol.assign(n + 1, 0);
  for (int c = 0; c <= n; c++) {
    t.xCol[t.xRow[c]] = c;
    t.oCol[t.oRow[c]] = c;
  }
  t.validate();

  MoveResult res;
  res.move = Move{Move::Stabilize, r0, c0};
  res.to = t;
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(t, MINUS, plumbing());
  int pc = c0 + 1, pr = r0 + 1;  // the new crossing
  int newZCol = c0 + 1, newWCol = c0 + 1;
  GridDiagram big = t;
  res.map = moduleMap(
      *res.srcComplex, *res.dstComplex, "stabilize", zeroShift(g),
      [big, n, c0, r0, pc, pr, newZCol, newWCol](std::uint32_t gen) {
        State x = stateUnrank(n, gen);
        State ix(n + 1);
        for (int c = 0; c < n; c++) {
          int nc = c + (c > c0 ? 1 : 0);
          int nh = x[c] + (x[c] > r0 ? 1 : 0);
          ix[nc] = static_cast<std::uint8_t>(nh);
        }
        ix[pc] = static_cast<std::uint8_t>(pr);
        Element e;
        snailTermsNE(big, ix, pc, pr, [&](const State& y, int nz, int nzStar, Mono w) {
          if (nz != nzStar) return;
          e.push(Term{stateRank(y), w / Mono::var(newWCol, w.exponent(newWCol))});
        });
        e.normalize();
        return e;
      });
  (void)newZCol;
  return res;
}

MoveResult destabilizeSE(const GridDiagram& g, int comp) {
  int n = g.n;
  if (g.k[comp] < 2) fail(Err::ComponentTooSmall, "nothing to destabilize");
  int last = g.k[comp] - 1;
  int wcol = g.wColOf(comp, last);
  int zcol = g.zColOf(comp, last);
  if (zcol != wcol + 1) fail(Err::BadConfiguration, "pair is not [w|z] in adjacent columns");
  int r0 = g.oRow[wcol];
  if (g.xRow[zcol] != r0) fail(Err::BadConfiguration, "pair does not share a row");
  if (r0 > n - 2) fail(Err::BadConfiguration, "pair row touches the seam; translate first");
  if (g.special[comp] == last) fail(Err::BadConfiguration, "cannot remove the special marking");

  int pc = zcol, pr = r0 + 1;  // crossing: z is to its southeast, w to its southwest
  auto mapColDown = [wcol](int c) { return c - (c > wcol ? 1 : 0); };
  auto mapRowDown = [r0](int r) { return r - (r > r0 ? 1 : 0); };
  GridDiagram t;
  t.n = n - 1;
  t.xRow.assign(n - 1, 0);
  t.oRow.assign(n - 1, 0);
  t.zLab.assign(n - 1, MarkLabel{});
  t.wLab.assign(n - 1, MarkLabel{});
  t.numComponents = g.numComponents;
  t.k = g.k;
  t.k[comp]--;
  t.special = g.special;
  for (int c = 0; c < n; c++) {
    if (g.xRow[c] != r0 || g.zLab[c].idx != last || g.zLab[c].comp != comp) {
      t.xRow[mapColDown(c)] = mapRowDown(g.xRow[c]);
      t.zLab[mapColDown(c)] = g.zLab[c];
    }
    if (g.oRow[c] != r0 || g.wLab[c].idx != last || g.wLab[c].comp != comp) {
      t.oRow[mapColDown(c)] = mapRowDown(g.oRow[c]);
      t.wLab[mapColDown(c)] = g.wLab[c];
    }
  }
  t.xCol.assign(n - 1, 0);
  t.oCol.assign(n - 1, 0);
  for (int c = 0; c < n - 1; c++) {
    t.xCol[t.xRow[c]] = c;
    t.oCol[t.oRow[c]] = c;
  }
  t.validate();

  // Variable bookkeeping: the removed O's exponent moves to the O of the
  // removed X's column (they share the merged column).
  std::vector<int> newVar(n);
  for (int v = 0; v < n; v++) newVar[v] = (v == wcol) ? wcol : mapColDown(v);
  // newVar[zcol] == wcol as well: both collapse onto the merged column.

  MoveResult res;
  res.move = Move{Move::Destabilize, r0, wcol, 0, comp};
  res.to = t;
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(t, MINUS, plumbing());
  GridDiagram big = g;
  int zStarCol = zcol;
  res.map = moduleMap(
      *res.srcComplex, *res.dstComplex, "destabilize", zeroShift(g),
      [big, n, pc, pr, wcol, r0, newVar, zStarCol](std::uint32_t gen) {
        State x = stateUnrank(n, gen);
        Element e;
        snailTermsSE(big, x, pc, pr, [&](const State& iy, int nz, int nzStar, Mono w) {
          if (nz != nzStar) return;
          // iy contains the crossing; strip it to a state of the small grid
          State y(n - 1);
          for (int c = 0; c < n; c++) {
            if (c == pc) continue;
            int nc = c - (c > wcol ? 1 : 0);
            int nh = iy[c] - (iy[c] > r0 ? 1 : 0);
            y[nc] = static_cast<std::uint8_t>(nh);
          }
          e.push(Term{stateRank(y), remapVars(w, newVar)});
        });
        e.normalize();
        return e;
      });
  (void)zStarCol;
  return res;
}

MoveResult renumber(const GridDiagram& g, int comp, const std::vector<int>& sigma,
                    const std::vector<int>& tau) {
  int k = g.k[comp];
  if (static_cast<int>(sigma.size()) != k || static_cast<int>(tau.size()) != k)
    fail(Err::IndexOutOfRange, "renumbering permutations must cover the component");
  GridDiagram t = g;
  for (int c = 0; c < g.n; c++) {
    if (t.wLab[c].comp == comp) t.wLab[c].idx = sigma[t.wLab[c].idx];
    if (t.zLab[c].comp == comp) t.zLab[c].idx = tau[t.zLab[c].idx];
  }
  t.special[comp] = sigma[t.special[comp]];
  t.validate();
  MoveResult res;
  res.move = Move{Move::Renumber, 0, 0, 0, comp, sigma, tau};
  res.to = t;
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(t, MINUS, plumbing());
  // Variables are attached to the O-markings themselves (their columns), so
  // renaming indices does not move any coefficient.
  res.map = identityBetween(*res.srcComplex, *res.dstComplex, "renumber");
  return res;
}

namespace {

class TranslateMap final : public LinearMap {
 public:
  int n = 0, dc = 0, dr = 0;
  Element applyTerm(const Term& t) const override {
    State x = stateUnrank(n, t.gen);
    State y(n);
    for (int c = 0; c < n; c++) y[(c + dc) % n] = static_cast<std::uint8_t>((x[c] + dr) % n);
    Mono m;
    for (int v = 0; v < n; v++) {
      int e = t.mono.exponent(v);
      if (e) m = m * Mono::var((v + dc) % n, e);
    }
    return Element(Term{stateRank(y), m});
  }
};

}  // namespace

MoveResult relabelTorus(const GridDiagram& g, int dc, int dr) {
  MoveResult res;
  res.move = Move{Move::RelabelTorus};
  res.move.dc = dc;
  res.move.dr = dr;
  res.to = translateGrid(g, dc, dr);
  res.srcComplex = buildComplex(g, MINUS, plumbing());
  res.dstComplex = buildComplex(res.to, MINUS, plumbing());
  auto m = std::make_shared<TranslateMap>();
  m->src = res.srcComplex.get();
  m->dst = res.dstComplex.get();
  m->n = g.n;
  m->dc = ((dc % g.n) + g.n) % g.n;
  m->dr = ((dr % g.n) + g.n) % g.n;
  m->name = "relabel";
  m->shift = zeroShift(g);
  m->shiftKnown = true;
  res.map = m;
  return res;
}

MapPtr MoveSequence::composed() const {
  if (steps.empty()) fail(Err::IndexOutOfRange, "empty move sequence");
  MapPtr m = steps.front().map;
  for (std::size_t i = 1; i < steps.size(); i++) m = compose(steps[i].map, m);
  return m;
}

// --- superstabilization ----------------------------------------------------------------

namespace {

// The two legal 2x2 patterns, keyed by the block's southwest cell (a,b):
// type 1: O northeast, X southeast, O southwest, northwest empty;
// type 2: O northwest, X northeast, X southwest, southeast empty.
bool blockPattern1(const GridDiagram& g, int a, int b) {
  int n = g.n;
  int a1 = (a + 1) % n, b1 = (b + 1) % n;
  return g.oRow[a1] == b1 && g.xRow[a1] == b && g.oRow[a] == b &&
         g.xRow[a] != b1;  // northwest cell (a,b1) has no X; no O either since column a's O is at b
}

bool blockPattern2(const GridDiagram& g, int a, int b) {
  int n = g.n;
  int a1 = (a + 1) % n, b1 = (b + 1) % n;
  return g.oRow[a] == b1 && g.xRow[a1] == b1 && g.xRow[a] == b && g.oRow[a1] != b;
}

void coveredMarkings(const GridDiagram& g, std::vector<bool>& xCovered,
                     std::vector<bool>& oCovered) {
  int n = g.n;
  xCovered.assign(n, false);
  oCovered.assign(n, false);
  for (int a = 0; a < n; a++) {
    for (int b = 0; b < n; b++) {
      int a1 = (a + 1) % n, b1 = (b + 1) % n;
      if (blockPattern1(g, a, b)) {
        oCovered[a1] = true;  // NE
        xCovered[a1] = true;  // SE
        oCovered[a] = true;   // SW
      }
      if (blockPattern2(g, a, b)) {
        oCovered[a] = true;   // NW
        xCovered[a1] = true;  // NE
        xCovered[a] = true;   // SW
      }
    }
  }
}

}  // namespace

bool isSuperstabilized(const GridDiagram& g) {
  std::vector<bool> xc, oc;
  coveredMarkings(g, xc, oc);
  for (int c = 0; c < g.n; c++)
    if (!xc[c] || !oc[c]) return false;
  return true;
}

MoveSequence superstabilize(const GridDiagram& g) {
  MoveSequence seq;
  seq.source = g;
  GridDiagram cur = g;
  for (int guard = 0; guard < 8 * g.n + 16; guard++) {
    std::vector<bool> xc, oc;
    coveredMarkings(cur, xc, oc);
    int stabR = -1, stabC = -1;
    for (int c = 0; c < cur.n && stabR < 0; c++) {
      if (!oc[c]) {  // uncovered O: stabilize at its own cell
        stabR = cur.oRow[c];
        stabC = c;
      }
    }
    if (stabR < 0) {
      for (int c = 0; c < cur.n && stabR < 0; c++) {
        if (!xc[c]) {  // uncovered X: stabilize at the cell west of it
          stabR = cur.xRow[c];
          stabC = (c + cur.n - 1) % cur.n;
        }
      }
    }
    if (stabR < 0) break;
    MoveResult mr = stabilizeNE(cur, stabR, stabC);
    cur = mr.to;
    seq.steps.push_back(std::move(mr));
  }
  if (!isSuperstabilized(cur))
    fail(Err::ValidationError, "superstabilization did not converge");
  seq.target = cur;
  return seq;
}

// --- the basepoint pipeline ---------------------------------------------------------------

namespace {

bool sameLabeledGrid(const GridDiagram& a, const GridDiagram& b) {
  if (a.n != b.n) return false;
  for (int c = 0; c < a.n; c++) {
    if (a.xRow[c] != b.xRow[c] || a.oRow[c] != b.oRow[c]) return false;
    if (!(a.zLab[c] == b.zLab[c]) || !(a.wLab[c] == b.wLab[c])) return false;
  }
  return a.special == b.special;
}

// Column / row correspondence between equally labeled diagrams; labels pin
// each column (and each row) uniquely.  Empty when the match fails.
std::vector<int> matchColumns(const GridDiagram& a, const GridDiagram& b) {
  std::vector<int> perm(a.n, -1);
  for (int c = 0; c < a.n; c++) {
    for (int c2 = 0; c2 < b.n; c2++) {
      if (a.zLab[c] == b.zLab[c2] && a.wLab[c] == b.wLab[c2]) {
        if (perm[c] >= 0) return {};
        perm[c] = c2;
      }
    }
    if (perm[c] < 0) return {};
  }
  return perm;
}

std::vector<int> matchRows(const GridDiagram& a, const GridDiagram& b) {
  std::vector<int> perm(a.n, -1);
  for (int r = 0; r < a.n; r++) {
    MarkLabel az = a.zLab[a.xCol[r]], aw = a.wLab[a.oCol[r]];
    for (int r2 = 0; r2 < b.n; r2++) {
      if (az == b.zLab[b.xCol[r2]] && aw == b.wLab[b.oCol[r2]]) {
        if (perm[r] >= 0) return {};
        perm[r] = r2;
      }
    }
    if (perm[r] < 0) return {};
  }
  return perm;
}

// Realize the row permutation rowPerm (and then the column permutation) by
// legal adjacent commutations, appending the moves.  Returns false if the
// greedy bubble gets stuck.
bool scheduleSwaps(GridDiagram& cur, std::vector<MoveResult>& steps, std::vector<int> rowPerm,
                   std::vector<int> colPerm) {
  int n = cur.n;
  bool progress = true;
  auto sorted = [&](const std::vector<int>& p) {
    for (int i = 0; i < n; i++)
      if (p[i] != i) return false;
    return true;
  };
  while (progress && (!sorted(rowPerm) || !sorted(colPerm))) {
    progress = false;
    for (int r = 0; r < n - 1; r++) {
      if (rowPerm[r] > rowPerm[r + 1] && rowsCommutable(cur, r)) {
        MoveResult mr = commuteRows(cur, r);
        cur = mr.to;
        steps.push_back(std::move(mr));
        std::swap(rowPerm[r], rowPerm[r + 1]);
        progress = true;
      }
    }
    for (int c = 0; c < n - 1; c++) {
      if (colPerm[c] > colPerm[c + 1] && colsCommutable(cur, c)) {
        MoveResult mr = commuteCols(cur, c);
        cur = mr.to;
        steps.push_back(std::move(mr));
        std::swap(colPerm[c], colPerm[c + 1]);
        progress = true;
      }
    }
  }
  return sorted(rowPerm) && sorted(colPerm);
}

}  // namespace

PipelineResult basepointMovePipeline(const GridDiagram& g, int comp, int j) {
  if (!isSuperstabilized(g)) fail(Err::NotSuperstabilized, "pipeline needs a superstabilized grid");
  if (g.k[comp] < 2) fail(Err::ComponentTooSmall, "component needs k > 1");
  for (int m = 0; m < g.k[comp]; m++)
    if (g.bBij(comp, m) != m)
      fail(Err::ValidationError, "pipeline needs canonical marking numbering");
  if (g.special[comp] != j) fail(Err::BadConfiguration, "special marking is not at index j");
  int k0 = g.k[comp];
  int jn = (j + 1) % k0;

  PipelineResult out;
  out.seq.source = g;
  GridDiagram cur = g;

  // Local configuration around w_j: (1) w_j directly north of z_j with
  // w_{j+1} west-adjacent; (2) only w_{j+1} west-adjacent; (3) the rest.
  {
    int n = g.n;
    int zjCol = g.zColOf(comp, j);
    int wjRow = g.oRow[g.wColOf(comp, j)], zjRow = g.xRow[zjCol];
    int wnCol = g.wColOf(comp, jn);
    bool wjNorth = (wjRow == (zjRow + 1) % n);
    bool wnWest = (wnCol == (zjCol + n - 1) % n) && (g.oRow[wnCol] == zjRow);
    out.configurationCase = (wjNorth && wnWest) ? 1 : (wnWest ? 2 : 3);
  }

  // 1. stabilize at the cell of w_j
  {
    MoveResult mr = stabilizeNE(cur, g.oRow[g.wColOf(comp, j)], g.wColOf(comp, j));
    cur = mr.to;
    out.seq.steps.push_back(std::move(mr));
  }

  GridDiagram want = g;
  want.special[comp] = jn;

  // Index rotation applied later: w: j -> j+1 -> top -> j; z: j <-> top.
  std::vector<int> sigma(k0 + 1), tau(k0 + 1);
  for (int i = 0; i <= k0; i++) sigma[i] = tau[i] = i;
  sigma[j] = jn;
  sigma[jn] = k0;
  sigma[k0] = j;
  tau[j] = k0;
  tau[k0] = j;
  std::vector<int> sigmaInv(k0 + 1), tauInv(k0 + 1);
  for (int i = 0; i <= k0; i++) {
    sigmaInv[sigma[i]] = i;
    tauInv[tau[i]] = i;
  }

  // 2/3. commutations: move rows and columns until the diagram matches a
  // kink-insertion of the target, which the renumbering and the
  // destabilization then undo.  The splice site is searched deterministically.
  {
    bool scheduled = false;
    GridDiagram base = cur;
    for (int gamma = 0; gamma < want.n && !scheduled; gamma++) {
      if (want.wLab[gamma].comp != comp) continue;
      for (int delta = 0; delta < want.n && !scheduled; delta++) {
        GridDiagram t = kinkInsert(want, comp, gamma, delta);
        // rewind the renumbering so labels match the current diagram
        for (int c = 0; c <= want.n; c++) {
          if (t.wLab[c].comp == comp) t.wLab[c].idx = sigmaInv[t.wLab[c].idx];
          if (t.zLab[c].comp == comp) t.zLab[c].idx = tauInv[t.zLab[c].idx];
        }
        t.special[comp] = sigmaInv[t.special[comp]];
        std::vector<int> colPerm = matchColumns(base, t);
        std::vector<int> rowPerm = matchRows(base, t);
        if (colPerm.empty() || rowPerm.empty()) continue;
        GridDiagram trial = base;
        std::vector<MoveResult> steps;
        if (!scheduleSwaps(trial, steps, rowPerm, colPerm)) continue;
        if (!sameLabeledGrid(trial, t)) continue;
        cur = trial;
        for (auto& s : steps) out.seq.steps.push_back(std::move(s));
        scheduled = true;
      }
    }
    if (!scheduled) fail(Err::BadConfiguration, "no legal commutation schedule found");
  }

  // 4. renumber
  {
    MoveResult mr = renumber(cur, comp, sigma, tau);
    cur = mr.to;
    out.seq.steps.push_back(std::move(mr));
  }

  // 5. destabilize the pair now labeled with the top index
  {
    MoveResult mr = destabilizeSE(cur, comp);
    cur = mr.to;
    out.seq.steps.push_back(std::move(mr));
  }

  // 6. final torus identification onto g with the special marking advanced
  if (!sameLabeledGrid(cur, want)) {
    bool fixed = false;
    for (int dc = 0; dc < cur.n && !fixed; dc++) {
      for (int dr = 0; dr < cur.n && !fixed; dr++) {
        if (sameLabeledGrid(translateGrid(cur, dc, dr), want)) {
          MoveResult mr = relabelTorus(cur, dc, dr);
          cur = mr.to;
          out.seq.steps.push_back(std::move(mr));
          fixed = true;
        }
      }
    }
    if (!fixed) fail(Err::BadConfiguration, "pipeline did not land on the expected diagram");
  }
  out.seq.target = cur;
  out.target = cur;
  return out;
}

// --- move scripts ---------------------------------------------------------------------------

MoveSequence runMoveScript(const GridDiagram& g, const std::string& script) {
  MoveSequence seq;
  seq.source = g;
  GridDiagram cur = g;
  std::istringstream in(script);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd) || cmd.empty() || cmd[0] == '#') continue;
    MoveResult mr;
    if (cmd == "hcommute") {
      int r, crossing = 0;
      ls >> r;
      ls >> crossing;
      mr = commuteRows(cur, r, crossing);
    } else if (cmd == "vcommute") {
      int c, crossing = 0;
      ls >> c;
      ls >> crossing;
      mr = commuteCols(cur, c, crossing);
    } else if (cmd == "stabilize") {
      int r, c;
      std::string variant;
      ls >> r >> c >> variant;
      if (!variant.empty() && variant != "ne")
        fail(Err::ParseError, "only the ne stabilization variant is supported");
      mr = stabilizeNE(cur, r, c);
    } else if (cmd == "destabilize") {
      int comp;
      ls >> comp;
      mr = destabilizeSE(cur, comp - 1);
    } else if (cmd == "renumber") {
      int comp;
      ls >> comp;
      std::vector<int> sigma(cur.k[comp - 1]), tau(cur.k[comp - 1]);
      for (auto& v : sigma) {
        ls >> v;
        v--;
      }
      for (auto& v : tau) {
        ls >> v;
        v--;
      }
      mr = renumber(cur, comp - 1, sigma, tau);
    } else if (cmd == "relabel") {
      int dc, dr;
      ls >> dc >> dr;
      mr = relabelTorus(cur, dc, dr);
    } else {
      fail(Err::ParseError, "unknown move: " + cmd);
    }
    cur = mr.to;
    seq.steps.push_back(std::move(mr));
  }
  seq.target = cur;
  return seq;
}

}  // namespace gridfloer
