#include "gridfloer/complex.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gridfloer/parallel.hpp"

namespace gridfloer {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

// --- Element -------------------------------------------------------------------

void Element::normalize() {
  std::sort(terms_.begin(), terms_.end());
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

Element& Element::operator+=(const Element& o) {
  if (o.terms_.empty()) return *this;
  std::vector<Term> merged;
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

Element Element::times(Mono m) const {
  Element r;
  r.terms_.reserve(terms_.size());
  for (auto& t : terms_) r.terms_.push_back(Term{t.gen, t.mono * m});
  return r;  // order by (gen, mono) is preserved under a common shift
}

Element Element::times(const PolyF2& p) const {
  Element r;
  p.forEach([&](Mono m) { r += times(m); });
  return r;
}

Element Element::reduceMod(std::uint32_t killedMask) const {
  if (killedMask == 0) return *this;
  Element r;
  for (auto& t : terms_)
    if (!t.mono.touches(killedMask)) r.terms_.push_back(t);
  return r;
}

void Element::pushScaled(std::uint32_t g, const PolyF2& p, Mono extra) {
  p.forEach([&](Mono m) { terms_.push_back(Term{g, m * extra}); });
}

std::string Element::str(const GridDiagram& g) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    if (!t.mono.isOne()) os << PolyF2(t.mono).str(g.n) << "*";
    os << stateStr(stateUnrank(g.n, t.gen));
  }
  return os.str();
}

// --- ChainComplex ----------------------------------------------------------------

ChainComplex::ChainComplex(GridDiagram g, CoefficientSpec spec)
    : g_(std::move(g)), coeff_(spec), numGens_(static_cast<std::uint32_t>(factorial(g_.n))) {}

void ChainComplex::dColumn(std::uint32_t gen,
                           std::vector<std::pair<std::uint32_t, PolyF2>>& out) const {
  out.clear();
  State x = stateUnrank(g_.n, gen);
  std::vector<std::pair<std::uint32_t, Mono>> hits;
  forEachEmptyRectangle(g_, x, [&](const Rectangle& r, const State& y) {
    if (countX(g_, r) != 0) return;
    Mono w = oWeight(g_, r);
    if (w.touches(coeff_.killedMask)) return;
    hits.emplace_back(stateRank(y), w);
  });
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; i < hits.size();) {
    if (i + 1 < hits.size() && hits[i] == hits[i + 1]) {  // F2 cancellation
      i += 2;
      continue;
    }
    if (!out.empty() && out.back().first == hits[i].first) {
      out.back().second += PolyF2(hits[i].second);
    } else {
      out.emplace_back(hits[i].first, PolyF2(hits[i].second));
    }
    i++;
  }
}

Element ChainComplex::d(const Term& t) const {
  State x = stateUnrank(g_.n, t.gen);
  Element r;
  forEachEmptyRectangle(g_, x, [&](const Rectangle& rect, const State& y) {
    if (countX(g_, rect) != 0) return;
    Mono w = oWeight(g_, rect);
    Mono total = w * t.mono;
    if (total.touches(coeff_.killedMask)) return;
    r.push(Term{stateRank(y), total});
  });
  r.normalize();
  return r;
}

Element ChainComplex::d(const Element& e) const {
  Element r;
  for (auto& t : e.terms()) r += d(t);
  return r;
}

Bigrading ChainComplex::grading(std::uint32_t gen) const {
  return gradings(g_, stateUnrank(g_.n, gen));
}

Bigrading ChainComplex::grading(const Term& t) const {
  Bigrading b = grading(t.gen);
  for (int v = 0; v < g_.n; v++) {
    int e = t.mono.exponent(v);
    if (!e) continue;
    b.m2 -= 4 * e;
    b.a2[g_.wLab[v].comp] -= 2 * e;
  }
  return b;
}

void ChainComplex::bulkGradings(std::vector<std::int16_t>& m2,
                                std::vector<std::int16_t>& a2flat) const {
  const int n = g_.n;
  const int l = g_.numComponents;
  m2.assign(numGens_, 0);
  a2flat.assign(static_cast<std::size_t>(numGens_) * l, 0);

  // Winding number of component i around lattice point (c,r): signed count of
  // component-i vertical segments in columns west of c crossing height r.
  std::vector<std::vector<int>> wn(l, std::vector<int>(n * n, 0));
  for (int c = 0; c < n; c++) {
    for (int r = 0; r < n; r++) {
      for (int j = 0; j < c; j++) {
        int comp = g_.zLab[j].comp;
        if (g_.xRow[j] >= r && g_.oRow[j] < r) wn[comp][c * n + r]++;
        if (g_.oRow[j] >= r && g_.xRow[j] < r) wn[comp][c * n + r]--;
      }
    }
  }

  // Calibrate the additive shift on one state against the exact formula; the
  // difference of the two A computations is constant across states.
  State id(n);
  for (int c = 0; c < n; c++) id[c] = static_cast<std::uint8_t>(c);
  Bigrading ref = gradings(g_, id);
  std::vector<int> shift2(l, 0);
  for (int i = 0; i < l; i++) {
    int s = ref.a2[i];
    for (int c = 0; c < n; c++) s += 2 * wn[i][c * n + id[c]];
    shift2[i] = s;
  }

  long ioo = 0;  // I(O,O)
  for (int c = 0; c < n; c++)
    for (int c2 = c + 1; c2 < n; c2++)
      if (g_.oRow[c] < g_.oRow[c2]) ioo++;

  parallelChunks(numGens_, [&](std::size_t lo, std::size_t hi) {
    State x = stateUnrank(n, static_cast<std::uint32_t>(lo));
    for (std::size_t gidx = lo; gidx < hi; gidx++) {
      long ixx = 0, ixo = 0, iox = 0;
      for (int c = 0; c < n; c++) {
        for (int c2 = c; c2 < n; c2++) {
          if (c2 > c && x[c] < x[c2]) ixx++;
          if (x[c] <= g_.oRow[c2]) ixo++;           // c <= c2 cases
          if (c2 > c && g_.oRow[c] < x[c2]) iox++;  // strict column inequality
        }
      }
      long m = ixx - ixo - iox + ioo + 1;
      m2[gidx] = static_cast<std::int16_t>(2 * m);
      for (int i = 0; i < l; i++) {
        int a2 = shift2[i];
        for (int c = 0; c < n; c++) a2 -= 2 * wn[i][c * n + x[c]];
        a2flat[gidx * l + i] = static_cast<std::int16_t>(a2);
      }
      std::next_permutation(x.begin(), x.end());
    }
  });
}

void ChainComplex::verifyD2(const BuildOptions& opt) const {
  BuildOptions::D2Check mode = opt.d2Check;
  if (mode == BuildOptions::AUTO) mode = g_.n <= 7 ? BuildOptions::EXHAUSTIVE : BuildOptions::SAMPLED;
  if (mode == BuildOptions::OFF) return;

  auto checkGen = [&](std::uint32_t gen) {
    Element dd = d(d(Term{gen, Mono()}));
    if (!dd.isZero())
      fail(Err::ValidationError,
           "d^2 != 0 at generator " + stateStr(stateUnrank(g_.n, gen)));
  };
  if (mode == BuildOptions::EXHAUSTIVE) {
    std::vector<std::string> firstError;
    parallelChunks(numGens_, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t g = lo; g < hi; g++) checkGen(static_cast<std::uint32_t>(g));
    });
  } else {
    std::uint64_t s = opt.seed + 0x5eedull;
    for (std::size_t i = 0; i < opt.d2Samples; i++)
      checkGen(static_cast<std::uint32_t>(splitmix64(s) % numGens_));
  }
}

std::shared_ptr<ChainComplex> buildComplex(const GridDiagram& g, CoeffFlavor flavor,
                                           const BuildOptions& opt) {
  if (g.n > opt.maxN) fail(Err::TooLarge, "grid index exceeds configured maximum");
  auto c = std::make_shared<ChainComplex>(g, coefficientSpec(g, flavor));
  c->verifyD2(opt);
  return c;
}

// --- linear maps -------------------------------------------------------------------

Element LinearMap::apply(const Element& e) const {
  Element r;
  for (auto& t : e.terms()) r += applyTerm(t);
  return r;
}

namespace {

class ModuleMap final : public LinearMap {
 public:
  std::function<Element(std::uint32_t)> column;
  Element applyTerm(const Term& t) const override {
    Element col = column(t.gen);
    if (!t.mono.isOne()) col = col.times(t.mono);
    return col.reduceMod(dst->coeff().killedMask);
  }
};

class ZeroMap final : public LinearMap {
 public:
  Element applyTerm(const Term&) const override { return Element(); }
};

class IdMap final : public LinearMap {
 public:
  Element applyTerm(const Term& t) const override {
    Element e(t);
    return e.reduceMod(dst->coeff().killedMask);
  }
};

class DiffMap final : public LinearMap {
 public:
  Element applyTerm(const Term& t) const override { return src->d(t); }
};

class ComposeMap final : public LinearMap {
 public:
  MapPtr outer, inner;
  Element applyTerm(const Term& t) const override { return outer->apply(inner->applyTerm(t)); }
};

class SumMap final : public LinearMap {
 public:
  std::vector<MapPtr> parts;
  Element applyTerm(const Term& t) const override {
    Element r;
    for (auto& p : parts) r += p->applyTerm(t);
    return r;
  }
};

class ScaleMap final : public LinearMap {
 public:
  PolyF2 poly;
  MapPtr f;
  Element applyTerm(const Term& t) const override {
    return f->applyTerm(t).times(poly).reduceMod(dst->coeff().killedMask);
  }
};

class RecoeffMap final : public LinearMap {
 public:
  MapPtr f;
  Element applyTerm(const Term& t) const override {
    if (t.mono.touches(src->coeff().killedMask)) return Element();
    return f->applyTerm(t).reduceMod(dst->coeff().killedMask);
  }
};

}  // namespace

MapPtr moduleMap(const ChainComplex& src, const ChainComplex& dst, std::string name,
                 Bigrading shift, std::function<Element(std::uint32_t)> column) {
  auto m = std::make_shared<ModuleMap>();
  m->src = &src;
  m->dst = &dst;
  m->name = std::move(name);
  m->shift = std::move(shift);
  m->shiftKnown = true;
  m->column = std::move(column);
  return m;
}

MapPtr zeroMap(const ChainComplex& c) {
  auto m = std::make_shared<ZeroMap>();
  m->src = m->dst = &c;
  m->name = "0";
  m->shiftKnown = false;
  return m;
}

MapPtr identityMap(const ChainComplex& c) {
  auto m = std::make_shared<IdMap>();
  m->src = m->dst = &c;
  m->name = "Id";
  m->shift.a2.assign(c.grid().numComponents, 0);
  m->shiftKnown = true;
  return m;
}

MapPtr identityBetween(const ChainComplex& src, const ChainComplex& dst, std::string name) {
  auto m = std::make_shared<IdMap>();
  m->src = &src;
  m->dst = &dst;
  m->name = std::move(name);
  m->shift.a2.assign(src.grid().numComponents, 0);
  m->shiftKnown = true;
  return m;
}

MapPtr differentialMap(const ChainComplex& c) {
  auto m = std::make_shared<DiffMap>();
  m->src = m->dst = &c;
  m->name = "d";
  m->shift.m2 = -2;
  m->shift.a2.assign(c.grid().numComponents, 0);
  m->shiftKnown = true;
  return m;
}

MapPtr compose(MapPtr outer, MapPtr inner) {
  auto m = std::make_shared<ComposeMap>();
  m->src = inner->src;
  m->dst = outer->dst;
  m->name = outer->name + "o" + inner->name;
  if (outer->shiftKnown && inner->shiftKnown && !outer->shift.a2.empty() &&
      outer->shift.a2.size() == inner->shift.a2.size()) {
    m->shift.m2 = outer->shift.m2 + inner->shift.m2;
    m->shift.a2.resize(outer->shift.a2.size());
    for (std::size_t i = 0; i < m->shift.a2.size(); i++)
      m->shift.a2[i] = outer->shift.a2[i] + inner->shift.a2[i];
    m->shiftKnown = true;
  }
  m->equivariantMask = outer->equivariantMask & inner->equivariantMask;
  m->outer = std::move(outer);
  m->inner = std::move(inner);
  return m;
}

MapPtr sum(std::vector<MapPtr> maps) {
  if (maps.empty()) fail(Err::IndexOutOfRange, "empty sum of maps");
  auto m = std::make_shared<SumMap>();
  m->src = maps.front()->src;
  m->dst = maps.front()->dst;
  m->name = "(";
  for (std::size_t i = 0; i < maps.size(); i++) m->name += (i ? "+" : "") + maps[i]->name;
  m->name += ")";
  m->shift = maps.front()->shift;
  m->shiftKnown = maps.front()->shiftKnown;
  for (auto& p : maps) m->equivariantMask &= p->equivariantMask;
  m->parts = std::move(maps);
  return m;
}

MapPtr scale(const PolyF2& p, MapPtr f) {
  auto m = std::make_shared<ScaleMap>();
  m->src = f->src;
  m->dst = f->dst;
  m->name = "(" + p.str(f->src->grid().n) + ")*" + f->name;
  m->shiftKnown = false;
  m->poly = p;
  m->f = std::move(f);
  return m;
}

MapPtr withCoefficients(MapPtr f, const ChainComplex& src, const ChainComplex& dst) {
  auto m = std::make_shared<RecoeffMap>();
  m->src = &src;
  m->dst = &dst;
  m->name = f->name;
  m->shift = f->shift;
  m->shiftKnown = f->shiftKnown;
  m->equivariantMask = f->equivariantMask & ~dst.coeff().killedMask;
  m->f = std::move(f);
  return m;
}

MapPtr commutatorWithD(MapPtr f) {
  MapPtr dSrc = differentialMap(*f->src);
  MapPtr dDst = differentialMap(*f->dst);
  return sum({compose(dDst, f), compose(f, dSrc)});
}

// --- verification ---------------------------------------------------------------------

VerifyReport verifyChainIdentity(MapPtr lhs, MapPtr rhs, const VerifyOptions& opt) {
  if (lhs->shiftKnown && rhs->shiftKnown && !(lhs->shift == rhs->shift) &&
      !lhs->shift.a2.empty() && !rhs->shift.a2.empty())
    fail(Err::GradingMismatch, "comparing maps with different declared shifts: " + lhs->name +
                                   " vs " + rhs->name);
  VerifyReport rep;
  const ChainComplex& src = *lhs->src;
  std::uint32_t numGens = src.numGens();

  std::vector<std::uint32_t> gens;
  if (numGens > opt.sampleThreshold) {
    rep.sampled = true;
    rep.seed = opt.seed;
    std::uint64_t s = opt.seed + 0xabcdull;
    gens.reserve(opt.sampleCount);
    for (std::size_t i = 0; i < opt.sampleCount; i++)
      gens.push_back(static_cast<std::uint32_t>(splitmix64(s) % numGens));
  } else {
    gens.resize(numGens);
    for (std::uint32_t i = 0; i < numGens; i++) gens[i] = i;
  }

  std::vector<Mono> prefixes{Mono()};
  if (opt.powerVar >= 0) {
    for (int p = 0; p <= opt.maxPower; p++) {
      for (int q = 0; q <= opt.maxPower - p; q++) {
        if (p + q == 0) continue;
        if (q > 0 && opt.powerVar2 < 0) continue;
        Mono m = Mono::var(opt.powerVar, p);
        if (q > 0) m = m * Mono::var(opt.powerVar2, q);
        prefixes.push_back(m);
      }
    }
  }

  for (auto g : gens) {
    for (auto& pre : prefixes) {
      Term t{g, pre};
      Element a = lhs->applyTerm(t);
      Element b = rhs->applyTerm(t);
      rep.tested++;
      if (!(a == b)) {
        rep.equal = false;
        rep.witness = t;
        rep.lhsValue = a.str(src.grid());
        rep.rhsValue = b.str(src.grid());
        rep.note = lhs->name + " != " + rhs->name;
        return rep;
      }
    }
  }
  return rep;
}

VerifyReport verifyEquivariance(MapPtr f, const VerifyOptions& opt) {
  VerifyReport rep;
  const ChainComplex& src = *f->src;
  const ChainComplex& dst = *f->dst;
  std::uint32_t numGens = src.numGens();
  std::uint64_t s = opt.seed + 0xef01ull;
  std::size_t count = std::min<std::size_t>(numGens, opt.sampleCount);
  for (std::size_t i = 0; i < count; i++) {
    std::uint32_t g =
        numGens > opt.sampleCount ? static_cast<std::uint32_t>(splitmix64(s) % numGens)
                                  : static_cast<std::uint32_t>(i);
    for (int v = 0; v < src.grid().n; v++) {
      if (!(f->equivariantMask >> v & 1u)) continue;
      if (src.coeff().kills(v)) continue;
      Term t{g, Mono::var(v)};
      Element a = f->applyTerm(t);
      Element b = f->applyTerm(Term{g, Mono()}).times(Mono::var(v)).reduceMod(
          dst.coeff().killedMask);
      rep.tested++;
      if (!(a == b)) {
        rep.equal = false;
        rep.witness = t;
        rep.lhsValue = a.str(src.grid());
        rep.rhsValue = b.str(src.grid());
        rep.note = f->name + " fails equivariance in U" + std::to_string(v);
        return rep;
      }
    }
  }
  return rep;
}

// --- reduction ---------------------------------------------------------------------------

int SmallComplex::indexOf(std::uint32_t gen) const {
  auto it = std::lower_bound(gens.begin(), gens.end(), gen);
  if (it == gens.end() || *it != gen) return -1;
  return static_cast<int>(it - gens.begin());
}

namespace {

struct HeapEdge {
  std::uint64_t keyB, keyA;
  std::uint32_t a, b;
  bool operator>(const HeapEdge& o) const {
    if (keyB != o.keyB) return keyB > o.keyB;
    return keyA > o.keyA;
  }
};

}  // namespace

Reduction reduce(const ChainComplex& c, const ReduceOptions& opt) {
  const std::uint32_t numGens = c.numGens();
  const int l = c.grid().numComponents;

  std::vector<std::int16_t> m2, a2flat;
  c.bulkGradings(m2, a2flat);

  // Order generators by (A lexicographic, M, index); cancellation consumes
  // unit entries in that order of the target generator for reproducibility.
  std::vector<std::uint32_t> order(numGens);
  for (std::uint32_t i = 0; i < numGens; i++) order[i] = i;
  auto gradLess = [&](std::uint32_t x, std::uint32_t y) {
    for (int i = 0; i < l; i++) {
      auto ax = a2flat[static_cast<std::size_t>(x) * l + i];
      auto ay = a2flat[static_cast<std::size_t>(y) * l + i];
      if (ax != ay) return ax < ay;
    }
    if (m2[x] != m2[y]) return m2[x] < m2[y];
    return x < y;
  };
  std::sort(order.begin(), order.end(), gradLess);
  std::vector<std::uint64_t> key(numGens);
  for (std::uint32_t i = 0; i < numGens; i++) key[order[i]] = i;

  // Adjacency; out-lists are kept exact (alive targets only), in-lists may
  // hold stale or duplicate sources and are filtered on use.
  std::vector<std::vector<std::pair<std::uint32_t, PolyF2>>> out(numGens);
  std::vector<std::vector<std::uint32_t>> in(numGens);
  {
    std::vector<std::pair<std::uint32_t, PolyF2>> col;
    for (std::uint32_t g = 0; g < numGens; g++) {
      c.dColumn(g, col);
      out[g] = col;
      for (auto& [y, p] : col) in[y].push_back(g);
    }
  }

  std::priority_queue<HeapEdge, std::vector<HeapEdge>, std::greater<HeapEdge>> heap;
  for (std::uint32_t g = 0; g < numGens; g++)
    for (auto& [y, p] : out[g])
      if (p.isUnit()) heap.push(HeapEdge{key[y], key[g], g, y});

  std::vector<std::uint8_t> alive(numGens, 1);

  Reduction red;
  red.hasLog_ = opt.keepLog;
  std::vector<Reduction::Step>& log = red.log_;

  auto findEntry = [&](std::uint32_t g, std::uint32_t y) -> PolyF2* {
    for (auto& e : out[g])
      if (e.first == y) return &e.second;
    return nullptr;
  };

  std::vector<std::pair<std::uint32_t, PolyF2>> row;
  while (!heap.empty()) {
    HeapEdge e = heap.top();
    heap.pop();
    if (!alive[e.a] || !alive[e.b]) continue;
    PolyF2* pe = findEntry(e.a, e.b);
    if (!pe || !pe->isUnit()) continue;
    std::uint32_t a = e.a, b = e.b;

    // Sources with an edge into b (deduplicated, sorted, without a).
    row.clear();
    {
      std::sort(in[b].begin(), in[b].end());
      in[b].erase(std::unique(in[b].begin(), in[b].end()), in[b].end());
      for (auto g : in[b]) {
        if (!alive[g] || g == a) continue;
        if (PolyF2* p = findEntry(g, b)) row.emplace_back(g, *p);
      }
    }
    std::sort(out[a].begin(), out[a].end());

    if (opt.keepLog) {
      Reduction::Step step;
      step.a = a;
      step.b = b;
      step.col.reserve(out[a].size() - 1);
      for (auto& [y, p] : out[a])
        if (y != b) step.col.push_back({y, p});
      step.row.reserve(row.size());
      for (auto& [g, p] : row) step.row.push_back({g, p});
      log.push_back(std::move(step));
    }

    alive[a] = alive[b] = 0;

    // Zig-zag update d(g) += c_g * d(a); the b entry of d(g) cancels.
    for (auto& [g, cg] : row) {
      for (auto& [y, ep] : out[a]) {
        if (!alive[y] && y != b) continue;
        PolyF2 add = cg * ep;
        if (add.isZero()) continue;
        bool existed = false;
        auto& og = out[g];
        for (std::size_t i = 0; i < og.size(); i++) {
          if (og[i].first != y) continue;
          existed = true;
          og[i].second += add;
          if (og[i].second.isZero()) {
            og[i] = og.back();
            og.pop_back();
          } else if (og[i].second.isUnit()) {
            heap.push(HeapEdge{key[y], key[g], g, y});
          }
          break;
        }
        if (!existed && y != b) {
          og.emplace_back(y, add);
          in[y].push_back(g);
          if (add.isUnit()) heap.push(HeapEdge{key[y], key[g], g, y});
        }
      }
    }

    // Drop edges into a.
    for (auto g : in[a]) {
      if (!alive[g]) continue;
      auto& og = out[g];
      for (std::size_t i = 0; i < og.size(); i++) {
        if (og[i].first == a) {
          og[i] = og.back();
          og.pop_back();
          break;
        }
      }
    }
    out[a].clear();
    out[a].shrink_to_fit();
    out[b].clear();
    out[b].shrink_to_fit();
    in[a].clear();
    in[a].shrink_to_fit();
    in[b].clear();
    in[b].shrink_to_fit();
  }
  red.numSteps_ = log.size();

  SmallComplex& sc = red.reduced;
  sc.parent = &c;
  sc.coeff = c.coeff();
  sc.numComponents = l;
  for (std::uint32_t g = 0; g < numGens; g++)
    if (alive[g]) sc.gens.push_back(g);
  sc.grading.reserve(sc.gens.size());
  for (auto g : sc.gens) {
    Bigrading bg;
    bg.m2 = m2[g];
    bg.a2.assign(a2flat.begin() + static_cast<std::size_t>(g) * l,
                 a2flat.begin() + static_cast<std::size_t>(g) * l + l);
    sc.grading.push_back(std::move(bg));
  }
  sc.d.resize(sc.gens.size());
  for (std::size_t i = 0; i < sc.gens.size(); i++) {
    auto& og = out[sc.gens[i]];
    std::sort(og.begin(), og.end());
    for (auto& [y, p] : og) {
      int j = sc.indexOf(y);
      assert(j >= 0);
      sc.d[i].emplace_back(j, p);
    }
  }
  return red;
}

namespace {

struct TermKey {
  std::uint64_t gen;
  std::uint64_t mono;
  bool operator==(const TermKey& o) const { return gen == o.gen && mono == o.mono; }
};
struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const {
    std::uint64_t h = k.gen * 0x9e3779b97f4a7c15ull ^ k.mono;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

// Parity-toggling term set keyed by generator for the replay passes.
class TermBag {
 public:
  void toggle(std::uint32_t gen, Mono m) {
    auto key = TermKey{gen, m.raw()};
    auto it = set_.find(key);
    if (it == set_.end()) {
      set_.insert(key);
      byGen_[gen].insert(m.raw());
    } else {
      set_.erase(it);
      auto git = byGen_.find(gen);
      git->second.erase(m.raw());
      if (git->second.empty()) byGen_.erase(git);
    }
  }
  // Monomials currently present on a generator (copy; callers mutate the bag).
  std::vector<std::uint64_t> monosOf(std::uint32_t gen) const {
    auto it = byGen_.find(gen);
    if (it == byGen_.end()) return {};
    return std::vector<std::uint64_t>(it->second.begin(), it->second.end());
  }
  Element toElement() const {
    Element e;
    for (auto& k : set_) e.push(Term{static_cast<std::uint32_t>(k.gen), Mono::fromRaw(k.mono)});
    e.normalize();
    return e;
  }
  void fill(const Element& e) {
    for (auto& t : e.terms()) toggle(t.gen, t.mono);
  }

 private:
  std::unordered_set<TermKey, TermKeyHash> set_;
  std::unordered_map<std::uint32_t, std::set<std::uint64_t>> byGen_;
};

}  // namespace

Element Reduction::includeApply(const Element& reducedElem) const {
  if (!hasLog_) fail(Err::ValidationError, "reduction ran without transport log");
  TermBag bag;
  bag.fill(reducedElem);
  for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
    // i_k(g) = g + (coeff of b in d_k(g)) * a
    for (auto& ent : it->row) {
      auto monos = bag.monosOf(ent.gen);
      for (auto mraw : monos)
        ent.coeff.forEach([&](Mono cm) { bag.toggle(it->a, Mono::fromRaw(mraw) * cm); });
    }
  }
  return bag.toElement();
}

Element Reduction::projectApply(const Element& origElem) const {
  if (!hasLog_) fail(Err::ValidationError, "reduction ran without transport log");
  TermBag bag;
  bag.fill(origElem);
  for (auto& step : log_) {
    // p_k: a -> 0, b -> d_k(a) - b.
    for (auto mraw : bag.monosOf(step.a)) bag.toggle(step.a, Mono::fromRaw(mraw));
    auto monos = bag.monosOf(step.b);
    for (auto mraw : monos) {
      Mono m = Mono::fromRaw(mraw);
      bag.toggle(step.b, m);
      for (auto& ent : step.col)
        ent.coeff.forEach([&](Mono cm) { bag.toggle(ent.gen, m * cm); });
    }
  }
  return bag.toElement();
}

Element Reduction::homotopyApply(const Element& origElem) const {
  if (!hasLog_) fail(Err::ValidationError, "reduction ran without transport log");
  // H = sum_k I_{k-1} h_k P_{k-1} with h_k: b_k -> a_k.  Forward pass records
  // eta_k = h_k(P_{k-1} x); the backward pass folds U = eta_k + i_k(U).
  TermBag bag;
  bag.fill(origElem);
  std::vector<Element> eta(log_.size());
  for (std::size_t k = 0; k < log_.size(); k++) {
    const Step& step = log_[k];
    Element ek;
    for (auto mraw : bag.monosOf(step.b)) ek.push(Term{step.a, Mono::fromRaw(mraw)});
    ek.normalize();
    eta[k] = std::move(ek);
    for (auto mraw : bag.monosOf(step.a)) bag.toggle(step.a, Mono::fromRaw(mraw));
    auto monos = bag.monosOf(step.b);
    for (auto mraw : monos) {
      Mono m = Mono::fromRaw(mraw);
      bag.toggle(step.b, m);
      for (auto& ent : step.col)
        ent.coeff.forEach([&](Mono cm) { bag.toggle(ent.gen, m * cm); });
    }
  }
  TermBag acc;
  for (std::size_t k = log_.size(); k-- > 0;) {
    acc.fill(eta[k]);  // toggles in eta_k
    const Step& step = log_[k];
    for (auto& ent : step.row) {
      auto monos = acc.monosOf(ent.gen);
      for (auto mraw : monos)
        ent.coeff.forEach([&](Mono cm) { acc.toggle(step.a, Mono::fromRaw(mraw) * cm); });
    }
  }
  return acc.toElement();
}

Element Reduction::transportedColumn(const LinearMap& f, int denseIdx) const {
  Element e = Element::gen(reduced.gens[denseIdx]);
  return projectApply(f.apply(includeApply(e)));
}

std::string dumpComplex(const SmallComplex& sc) {
  std::ostringstream os;
  const GridDiagram& g = sc.parent->grid();
  for (std::size_t i = 0; i < sc.gens.size(); i++) {
    for (auto& [j, p] : sc.d[i]) {
      os << stateStr(stateUnrank(g.n, sc.gens[i])) << " -> "
         << stateStr(stateUnrank(g.n, sc.gens[j])) << " : " << p.str(g.n) << "\n";
    }
  }
  return os.str();
}

}  // namespace gridfloer
