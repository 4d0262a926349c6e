#ifndef GRIDFLOER_MOVES_HPP
#define GRIDFLOER_MOVES_HPP

#include "gridfloer/complex.hpp"
#include "gridfloer/maps.hpp"

namespace gridfloer {

struct Move {
  enum Kind { HCommute, VCommute, Stabilize, Destabilize, Renumber, RelabelTorus } kind;
  int r = 0, c = 0;              // HCommute: lower row; VCommute: left column;
                                 // Stabilize: split cell; Destabilize: w-cell of the pair
  int crossing = 0;              // commutations: which intersection point
  int comp = 0;                  // component acted on
  std::vector<int> sigma, tau;   // Renumber (0-based images per marking index)
  int dr = 0, dc = 0;            // RelabelTorus
  std::string str() const;
};

// A grid move together with its induced chain map on the minus complexes.
struct MoveResult {
  Move move;
  GridDiagram to;
  std::shared_ptr<ChainComplex> srcComplex, dstComplex;
  MapPtr map;
};

// Swap the contents of rows r and r+1 (0 <= r <= n-2).  The marking pairs of
// the two rows must occupy disjoint, non-interleaved column arcs.  The chain
// map counts pentagons with one vertex at the chosen crossing of the old and
// new circle (crossing 0 is the western one).
MoveResult commuteRows(const GridDiagram& g, int r, int crossing = 0);
// Swap columns c and c+1; the transposed picture of commuteRows.
MoveResult commuteCols(const GridDiagram& g, int c, int crossing = 0);

bool rowsCommutable(const GridDiagram& g, int r);
bool colsCommutable(const GridDiagram& g, int c);

// Stabilization splitting row r0 and column c0, with the new O to the
// northeast and the new X to the southeast of the new crossing.  The new
// pair joins the component of row r0's markings with the next marking index.
MoveResult stabilizeNE(const GridDiagram& g, int r0, int c0);

// Destabilization removing the pair labeled (comp, k_comp-1), which must sit
// as [w | z] in adjacent columns of one row.  The chain map substitutes the
// removed O variable by the surviving O of the z's column.
MoveResult destabilizeSE(const GridDiagram& g, int comp);

// The horizontal-pair stabilization inverse to destabilizeSE: splices a
// [w | z] kink into column gamma at row level delta.
MoveResult stabilizeSE(const GridDiagram& g, int comp, int gamma, int delta);

// Rename marking indices within a component (labels only; the complex and
// the variables are untouched, so the induced map is the identity).
MoveResult renumber(const GridDiagram& g, int comp, const std::vector<int>& sigma,
                    const std::vector<int>& tau);

// Cyclic torus translation; induces the evident isomorphism.
MoveResult relabelTorus(const GridDiagram& g, int dc, int dr);

struct MoveSequence {
  GridDiagram source, target;
  std::vector<MoveResult> steps;
  MapPtr composed() const;  // composition of the step maps
};

// Stabilize until every marking lies in one of the two legal 2x2 patterns.
bool isSuperstabilized(const GridDiagram& g);
MoveSequence superstabilize(const GridDiagram& g);

// One basepoint step: the scripted stabilize / commute / renumber /
// destabilize sequence carrying the special marking of component `comp` from
// index j to j+1.  Requires a superstabilized, canonically numbered diagram.
struct PipelineResult {
  MoveSequence seq;
  int configurationCase = 0;  // 1, 2 or 3
  GridDiagram target;          // equals the source diagram with special j+1
};
PipelineResult basepointMovePipeline(const GridDiagram& g, int comp, int j);

// Parse a move script (one move per line) and apply it.
MoveSequence runMoveScript(const GridDiagram& g, const std::string& script);

// --- positive-domain enumeration (oracle support) --------------------------------

// All non-negative 2-chains joining x to y with every cell coefficient at
// most maxCoeff.  Exponential in n; intended for small grids and tests.
std::vector<Domain2Chain> enumeratePositiveDomains(const GridDiagram& g, const State& x,
                                                   const State& y, int maxCoeff);

// Snail-domain filters on a 2-chain (conditions at the crossing (pc, pr)).
bool isSnailNE(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y,
               int pc, int pr, int& mOut);
bool isSnailSE(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y,
               int pc, int pr, int& mOut);

}  // namespace gridfloer

#endif
