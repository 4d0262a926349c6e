#include "gridfloer/grid.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace gridfloer {

using nlohmann::json;

GridDiagram GridDiagram::parse(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const std::exception& e) {
    fail(Err::ParseError, e.what());
  }
  if (!j.contains("n") || !j.contains("x") || !j.contains("o"))
    fail(Err::ParseError, "grid JSON needs fields n, x, o");
  int n = j["n"].get<int>();
  std::vector<int> x = j["x"].get<std::vector<int>>();
  std::vector<int> o = j["o"].get<std::vector<int>>();
  std::vector<int> special;
  if (j.contains("special")) special = j["special"].get<std::vector<int>>();
  return fromPermutations(n, x, o, special);
}

GridDiagram GridDiagram::fromPermutations(int n, const std::vector<int>& x,
                                          const std::vector<int>& o,
                                          const std::vector<int>& special1Based) {
  GridDiagram g;
  g.n = n;
  if (n < 2) fail(Err::TooSmall, "grid index must be at least 2");
  if (n > Mono::kMaxVars) fail(Err::TooLarge, "grid index above supported maximum");
  if (static_cast<int>(x.size()) != n || static_cast<int>(o.size()) != n)
    fail(Err::NotAPermutation, "x and o must have length n");
  auto checkPerm = [n](const std::vector<int>& p, const char* name) {
    std::vector<bool> seen(n, false);
    for (int v : p) {
      if (v < 0 || v >= n || seen[v]) fail(Err::NotAPermutation, name);
      seen[v] = true;
    }
  };
  checkPerm(x, "x is not a permutation");
  checkPerm(o, "o is not a permutation");
  for (int c = 0; c < n; c++)
    if (x[c] == o[c]) fail(Err::CellCollision, "X and O share cell in column " + std::to_string(c));
  g.xRow = x;
  g.oRow = o;
  g.xCol.assign(n, 0);
  g.oCol.assign(n, 0);
  for (int c = 0; c < n; c++) {
    g.xCol[x[c]] = c;
    g.oCol[o[c]] = c;
  }

  // Trace components.  The w- and z-marking of one column are consecutive on
  // the link (columns carry w -> z), and the row carries z to the next w, so
  // the successor column of c is the column of the O in the row of c's X.
  std::vector<int> nextCol(n);
  for (int c = 0; c < n; c++) nextCol[c] = g.oCol[x[c]];
  std::vector<int> compOf(n, -1);
  g.zLab.assign(n, MarkLabel{});
  g.wLab.assign(n, MarkLabel{});
  int comp = 0;
  for (int c0 = 0; c0 < n; c0++) {
    if (compOf[c0] >= 0) continue;
    int c = c0, idx = 0;
    do {
      if (compOf[c] >= 0) fail(Err::TraceFailure, "component trace did not close up");
      compOf[c] = comp;
      g.zLab[c] = MarkLabel{comp, idx};
      g.wLab[c] = MarkLabel{comp, idx};
      idx++;
      c = nextCol[c];
    } while (c != c0);
    g.k.push_back(idx);
    comp++;
  }
  g.numComponents = comp;

  g.special.assign(comp, 0);
  if (!special1Based.empty()) {
    if (static_cast<int>(special1Based.size()) != comp)
      fail(Err::ParseError, "special must list one index per component");
    for (int i = 0; i < comp; i++) {
      int s = special1Based[i];
      if (s < 1 || s > g.k[i]) fail(Err::IndexOutOfRange, "special marking index out of range");
      g.special[i] = s - 1;
    }
  }
  g.validate();
  return g;
}

void GridDiagram::validate() const {
  std::vector<int> count(numComponents, 0);
  for (int c = 0; c < n; c++) {
    if (zLab[c].comp < 0 || wLab[c].comp < 0) fail(Err::ValidationError, "unlabeled marking");
    count[zLab[c].comp]++;
  }
  for (int i = 0; i < numComponents; i++)
    if (count[i] != k[i]) fail(Err::ValidationError, "component size mismatch");
  // Row tracing must stay inside a component.
  for (int c = 0; c < n; c++) {
    int wc = oCol[xRow[c]];
    if (wLab[wc].comp != zLab[c].comp) fail(Err::TraceFailure, "row segment crosses components");
  }
}

int GridDiagram::wColOf(int comp, int idx) const {
  for (int c = 0; c < n; c++)
    if (wLab[c].comp == comp && wLab[c].idx == idx) return c;
  fail(Err::IndexOutOfRange, "no such w-marking");
}

int GridDiagram::zColOf(int comp, int idx) const {
  for (int c = 0; c < n; c++)
    if (zLab[c].comp == comp && zLab[c].idx == idx) return c;
  fail(Err::IndexOutOfRange, "no such z-marking");
}

int GridDiagram::aBij(int comp, int j) const {
  int zc = zColOf(comp, j);
  int wc = oCol[xRow[zc]];  // w in the same row
  if (wLab[wc].comp != comp) fail(Err::TraceFailure, "row bijection leaves component");
  return wLab[wc].idx;
}

int GridDiagram::bBij(int comp, int j) const {
  int zc = zColOf(comp, j);
  if (wLab[zc].comp != comp) fail(Err::TraceFailure, "column bijection leaves component");
  return wLab[zc].idx;
}

CoefficientSpec coefficientSpec(const GridDiagram& g, CoeffFlavor flavor) {
  CoefficientSpec spec;
  switch (flavor) {
    case MINUS:
      break;
    case SIMPLY_BLOCKED:
      for (int i = 0; i < g.numComponents; i++) spec.killedMask |= 1u << g.specialVar(i);
      break;
    case TILDE:
      for (int c = 0; c < g.n; c++) spec.killedMask |= 1u << c;
      break;
  }
  return spec;
}

std::uint32_t GridDiagram::killedMaskFor(int flavor) const {
  return coefficientSpec(*this, static_cast<CoeffFlavor>(flavor)).killedMask;
}

std::string GridDiagram::describe() const {
  std::ostringstream os;
  os << "grid n=" << n << " components=" << numComponents << " x=[";
  for (int c = 0; c < n; c++) os << (c ? "," : "") << xRow[c];
  os << "] o=[";
  for (int c = 0; c < n; c++) os << (c ? "," : "") << oRow[c];
  os << "]";
  return os.str();
}

// --- states -----------------------------------------------------------------

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; i++) f *= i;
  return f;
}

std::uint32_t stateRank(const State& s) {
  int n = static_cast<int>(s.size());
  std::uint32_t rank = 0;
  for (int i = 0; i < n; i++) {
    int smaller = 0;
    for (int j = i + 1; j < n; j++)
      if (s[j] < s[i]) smaller++;
    rank += smaller * static_cast<std::uint32_t>(factorial(n - 1 - i));
  }
  return rank;
}

State stateUnrank(int n, std::uint32_t rank) {
  State s(n);
  std::vector<std::uint8_t> avail(n);
  for (int i = 0; i < n; i++) avail[i] = static_cast<std::uint8_t>(i);
  for (int i = 0; i < n; i++) {
    std::uint64_t f = factorial(n - 1 - i);
    int pick = static_cast<int>(rank / f);
    rank = static_cast<std::uint32_t>(rank % f);
    s[i] = avail[pick];
    avail.erase(avail.begin() + pick);
  }
  return s;
}

std::string stateStr(const State& s) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < s.size(); i++) os << (i ? " " : "") << int(s[i]);
  os << ")";
  return os.str();
}

// --- rectangles ---------------------------------------------------------------

bool rectangleEmpty(const GridDiagram& g, const State& x, const Rectangle& r) {
  int n = g.n;
  for (int d = 1; d < r.colLen; d++) {
    int c = (r.colStart + d) % n;
    int dr = (x[c] - r.rowStart + n) % n;
    if (dr >= 1 && dr <= r.rowLen - 1) return false;
  }
  return true;
}

std::vector<Rectangle> rectangles(const GridDiagram& g, const State& x, const State& y,
                                  bool emptyOnly) {
  std::vector<Rectangle> out;
  int n = g.n;
  std::vector<int> diff;
  for (int c = 0; c < n; c++)
    if (x[c] != y[c]) diff.push_back(c);
  if (diff.size() != 2) return out;
  int i = diff[0], j = diff[1];
  if (x[i] != y[j] || x[j] != y[i]) return out;
  for (int swap = 0; swap < 2; swap++) {
    int a = swap ? j : i, b = swap ? i : j;
    Rectangle r;
    r.colStart = a;
    r.colLen = (b - a + n) % n;
    r.rowStart = x[a];
    r.rowLen = (x[b] - x[a] + n) % n;
    r.cFrom = a;
    r.cTo = b;
    if (!emptyOnly || rectangleEmpty(g, x, r)) out.push_back(r);
  }
  return out;
}

int countX(const GridDiagram& g, const Rectangle& r) {
  int n = g.n, cnt = 0;
  for (int d = 0; d < r.colLen; d++) {
    int c = (r.colStart + d) % n;
    if ((g.xRow[c] - r.rowStart + n) % n < r.rowLen) cnt++;
  }
  return cnt;
}

int countXComp(const GridDiagram& g, const Rectangle& r, int comp) {
  int n = g.n, cnt = 0;
  for (int d = 0; d < r.colLen; d++) {
    int c = (r.colStart + d) % n;
    if (g.zLab[c].comp == comp && (g.xRow[c] - r.rowStart + n) % n < r.rowLen) cnt++;
  }
  return cnt;
}

bool coversX(const GridDiagram& g, const Rectangle& r, int col) {
  int n = g.n;
  if ((col - r.colStart + n) % n >= r.colLen) return false;
  return (g.xRow[col] - r.rowStart + n) % n < r.rowLen;
}

bool coversO(const GridDiagram& g, const Rectangle& r, int col) {
  int n = g.n;
  if ((col - r.colStart + n) % n >= r.colLen) return false;
  return (g.oRow[col] - r.rowStart + n) % n < r.rowLen;
}

Mono oWeight(const GridDiagram& g, const Rectangle& r) {
  Mono m;
  int n = g.n;
  for (int d = 0; d < r.colLen; d++) {
    int c = (r.colStart + d) % n;
    if ((g.oRow[c] - r.rowStart + n) % n < r.rowLen) m = m * Mono::var(c);
  }
  return m;
}

// --- gradings -----------------------------------------------------------------

namespace {

using Pt = std::pair<int, int>;  // doubled coordinates

long icount(const std::vector<Pt>& p, const std::vector<Pt>& q) {
  long c = 0;
  for (auto& a : p)
    for (auto& b : q)
      if (a.first < b.first && a.second < b.second) c++;
  return c;
}

long jsym(const std::vector<Pt>& p, const std::vector<Pt>& q) {
  return icount(p, q) + icount(q, p);  // 2*J(P,Q)
}

}  // namespace

Bigrading gradings(const GridDiagram& g, const State& x) {
  int n = g.n;
  std::vector<Pt> xs, os, zs;
  for (int c = 0; c < n; c++) {
    xs.push_back({2 * c, 2 * x[c]});
    os.push_back({2 * c + 1, 2 * g.oRow[c] + 1});
    zs.push_back({2 * c + 1, 2 * g.xRow[c] + 1});
  }
  Bigrading gr;
  gr.m2 = static_cast<int>(2 * (icount(xs, xs) - icount(xs, os) - icount(os, xs) + icount(os, os) + 1));

  gr.a2.assign(g.numComponents, 0);
  for (int i = 0; i < g.numComponents; i++) {
    std::vector<Pt> oi, zi;
    for (int c = 0; c < n; c++) {
      if (g.wLab[c].comp == i) oi.push_back({2 * c + 1, 2 * g.oRow[c] + 1});
      if (g.zLab[c].comp == i) zi.push_back({2 * c + 1, 2 * g.xRow[c] + 1});
    }
    long a4 = 2 * jsym(xs, zi) - 2 * jsym(xs, oi) - jsym(zs, zi) - jsym(os, zi) + jsym(zs, oi) +
              jsym(os, oi) - 2 * (g.k[i] - 1);
    if (a4 % 2 != 0) fail(Err::GradingMismatch, "Alexander grading not half-integral");
    gr.a2[i] = static_cast<int>(a4 / 2);
  }
  return gr;
}

// --- domains --------------------------------------------------------------------

Domain2Chain rectangleDomain(const GridDiagram& g, const Rectangle& r) {
  Domain2Chain d;
  d.n = g.n;
  d.coeff.assign(g.n * g.n, 0);
  for (int dc = 0; dc < r.colLen; dc++)
    for (int dr = 0; dr < r.rowLen; dr++)
      d.at((r.colStart + dc) % g.n, (r.rowStart + dr) % g.n) += 1;
  return d;
}

bool domainJoins(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y) {
  int n = g.n;
  if (d.n != n) return false;
  for (int c = 0; c < n; c++) {
    for (int h = 0; h < n; h++) {
      int cm = (c + n - 1) % n, hm = (h + n - 1) % n;
      int defect = d.at(c, h) - d.at(cm, h) - d.at(c, hm) + d.at(cm, hm);
      int want = (x[c] == h ? 1 : 0) - (y[c] == h ? 1 : 0);
      if (defect != want) return false;
    }
  }
  return true;
}

int maslovIndex(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y) {
  if (!domainJoins(g, d, x, y)) fail(Err::NotADomain, "corner condition fails");
  int n = g.n;
  auto corner4 = [&](int c, int h) {
    int cm = (c + n - 1) % n, hm = (h + n - 1) % n;
    return d.at(c, h) + d.at(cm, h) + d.at(c, hm) + d.at(cm, hm);
  };
  long mu4 = 0;
  for (int c = 0; c < n; c++) mu4 += corner4(c, x[c]) + corner4(c, y[c]);
  if (mu4 % 4 != 0) fail(Err::NotADomain, "quarter point measures do not close");
  return static_cast<int>(mu4 / 4);
}

int countMarkX(const Domain2Chain& d, const GridDiagram& g) {
  int c = 0;
  for (int col = 0; col < g.n; col++) c += d.at(col, g.xRow[col]);
  return c;
}

int countMarkO(const Domain2Chain& d, const GridDiagram& g) {
  int c = 0;
  for (int col = 0; col < g.n; col++) c += d.at(col, g.oRow[col]);
  return c;
}

// --- data-prep helpers ------------------------------------------------------------

GridDiagram transposeGrid(const GridDiagram& g) {
  GridDiagram t;
  t.n = g.n;
  t.xRow = g.xCol;
  t.oRow = g.oCol;
  t.xCol = g.xRow;
  t.oCol = g.oRow;
  t.numComponents = g.numComponents;
  t.k = g.k;
  t.special = g.special;
  t.zLab.assign(g.n, MarkLabel{});
  t.wLab.assign(g.n, MarkLabel{});
  for (int c = 0; c < g.n; c++) {
    t.zLab[c] = g.zLab[g.xCol[c]];
    t.wLab[c] = g.wLab[g.oCol[c]];
  }
  return t;
}

GridDiagram mirrorGrid(const GridDiagram& g) {
  std::vector<int> x(g.n), o(g.n);
  for (int c = 0; c < g.n; c++) {
    x[c] = g.n - 1 - g.xRow[c];
    o[c] = g.n - 1 - g.oRow[c];
  }
  return GridDiagram::fromPermutations(g.n, x, o);
}

GridDiagram translateGrid(const GridDiagram& g, int dc, int dr) {
  int n = g.n;
  GridDiagram t;
  t.n = n;
  t.xRow.assign(n, 0);
  t.oRow.assign(n, 0);
  t.xCol.assign(n, 0);
  t.oCol.assign(n, 0);
  t.zLab.assign(n, MarkLabel{});
  t.wLab.assign(n, MarkLabel{});
  t.numComponents = g.numComponents;
  t.k = g.k;
  t.special = g.special;
  dc = ((dc % n) + n) % n;
  dr = ((dr % n) + n) % n;
  for (int c = 0; c < n; c++) {
    int c2 = (c + dc) % n;
    t.xRow[c2] = (g.xRow[c] + dr) % n;
    t.oRow[c2] = (g.oRow[c] + dr) % n;
    t.zLab[c2] = g.zLab[c];
    t.wLab[c2] = g.wLab[c];
  }
  for (int c = 0; c < n; c++) {
    t.xCol[t.xRow[c]] = c;
    t.oCol[t.oRow[c]] = c;
  }
  return t;
}

}  // namespace gridfloer
