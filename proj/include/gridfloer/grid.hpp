#ifndef GRIDFLOER_GRID_HPP
#define GRIDFLOER_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gridfloer/algebra.hpp"

namespace gridfloer {

// Conventions used throughout: rows are numbered south to north, columns west
// to east, all 0-based in the fundamental domain [0,n)^2.  Cell (c,r) is the
// square [c,c+1)x[r,r+1); the X and O markings sit at cell centers; state
// coordinates sit at lattice points.  U variables are indexed by the column
// of their O-marking.

struct Bigrading {
  int m2 = 0;                // 2*M
  std::vector<int> a2;       // 2*A_i per component
  bool operator==(const Bigrading& o) const { return m2 == o.m2 && a2 == o.a2; }
};

struct MarkLabel {
  int comp = -1;
  int idx = -1;  // position in the component cycle, 0-based
  bool operator==(const MarkLabel& o) const { return comp == o.comp && idx == o.idx; }
};

// State: one coordinate per column, perm[c] = row.
using State = std::vector<std::uint8_t>;

class GridDiagram {
 public:
  int n = 0;
  std::vector<int> xRow, oRow;  // row of the X / O marking in column c
  std::vector<int> xCol, oCol;  // column of the X / O marking in row r

  // Marking labels, by column.  For freshly parsed diagrams the numbering is
  // canonical: within each component the w- and z-marking of one column share
  // an index, and the row bijection is idx -> idx+1 around the component.
  int numComponents = 0;
  std::vector<int> k;            // markings per component
  std::vector<MarkLabel> zLab;   // label of the X in column c
  std::vector<MarkLabel> wLab;   // label of the O in column c
  std::vector<int> special;      // per component: idx of the special w-marking

  static GridDiagram parse(const std::string& jsonText);
  static GridDiagram fromPermutations(int n, const std::vector<int>& x, const std::vector<int>& o,
                                      const std::vector<int>& special1Based = {});

  void validate() const;  // permutations, collisions, label consistency

  // Column of w_{comp,idx} / z_{comp,idx}.
  int wColOf(int comp, int idx) const;
  int zColOf(int comp, int idx) const;
  // U-variable of a marking (its O column).
  int varOf(int comp, int idx) const { return wColOf(comp, idx); }
  int specialVar(int comp) const { return wColOf(comp, special[comp]); }

  // a_i(j): index of the w-marking in the same row as z_{i,j}.
  int aBij(int comp, int j) const;
  // b_i(j): index of the w-marking in the same column as z_{i,j}.
  int bBij(int comp, int j) const;

  std::uint32_t killedMaskFor(int flavor) const;  // see CoeffFlavor

  std::string describe() const;

  bool operator==(const GridDiagram& o) const {
    return n == o.n && xRow == o.xRow && oRow == o.oRow;
  }
};

enum CoeffFlavor { MINUS = 0, SIMPLY_BLOCKED = 1, TILDE = 2 };

CoefficientSpec coefficientSpec(const GridDiagram& g, CoeffFlavor flavor);

// --- states ---------------------------------------------------------------

std::uint64_t factorial(int n);
std::uint32_t stateRank(const State& s);
State stateUnrank(int n, std::uint32_t rank);
std::string stateStr(const State& s);

// --- rectangles -----------------------------------------------------------

struct Rectangle {
  int colStart = 0, colLen = 0;  // covered columns colStart..colStart+colLen-1 (mod n)
  int rowStart = 0, rowLen = 0;
  // Corner data: the connecting pair of columns.
  int cFrom = 0, cTo = 0;  // state coordinates move at these columns

  bool containsCell(int n, int c, int r) const {
    int dc = (c - colStart + n) % n;
    int dr = (r - rowStart + n) % n;
    return dc < colLen && dr < rowLen;
  }
};

// All rectangles from x to y (exactly 2 when x,y differ in two coordinates,
// else none); with emptyOnly, only those with no coordinate of x in the
// interior.
std::vector<Rectangle> rectangles(const GridDiagram& g, const State& x, const State& y,
                                  bool emptyOnly);

bool rectangleEmpty(const GridDiagram& g, const State& x, const Rectangle& r);

// Rectangles out of x: for each unordered column pair and each wrap, the
// empty ones.  Calls f(rect, target state y); y is reused storage.
template <typename F>
void forEachEmptyRectangle(const GridDiagram& g, const State& x, F&& f) {
  int n = g.n;
  State y = x;
  for (int i = 0; i < n; i++) {
    for (int j = i + 1; j < n; j++) {
      std::swap(y[i], y[j]);
      for (int swap = 0; swap < 2; swap++) {
        int a = swap ? j : i, b = swap ? i : j;
        Rectangle r;
        r.colStart = a;
        r.colLen = (b - a + n) % n;
        r.rowStart = x[a];
        r.rowLen = (x[b] - x[a] + n) % n;
        r.cFrom = a;
        r.cTo = b;
        if (rectangleEmpty(g, x, r)) f(r, y);
      }
      std::swap(y[i], y[j]);
    }
  }
}

// Markings covered by a rectangle.
int countX(const GridDiagram& g, const Rectangle& r);                // n_z(R)
int countXComp(const GridDiagram& g, const Rectangle& r, int comp);  // n_{z_i}(R)
bool coversX(const GridDiagram& g, const Rectangle& r, int col);     // specific z
bool coversO(const GridDiagram& g, const Rectangle& r, int col);
Mono oWeight(const GridDiagram& g, const Rectangle& r);  // prod over covered O's of U_col

// --- gradings ---------------------------------------------------------------

// Absolute (M, A_1..A_l).  M via the planar southwest-pair count against the
// O-markings; A_i via the same count against X_i - O_i with the symmetric
// normalization.  Validated against the rectangle rules and the Alexander
// polynomial checks, not assumed.
Bigrading gradings(const GridDiagram& g, const State& x);

// --- domains (oracle support) ------------------------------------------------

struct Domain2Chain {
  int n = 0;
  std::vector<int> coeff;  // cell (c,r) at index c*n+r
  int at(int c, int r) const { return coeff[c * n + r]; }
  int& at(int c, int r) { return coeff[c * n + r]; }
  bool positive() const {
    for (int v : coeff)
      if (v < 0) return false;
    return true;
  }
  bool isZero() const {
    for (int v : coeff)
      if (v != 0) return false;
    return true;
  }
};

Domain2Chain rectangleDomain(const GridDiagram& g, const Rectangle& r);

// Corner condition del(del D cap alpha) = y - x at every lattice point.
bool domainJoins(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y);

// Combinatorial Maslov index mu(D) = n_x(D) + n_y(D); the Euler measure term
// vanishes because every region of a grid is a square.  Independent oracle;
// throws NotADomain when the corner condition fails.
int maslovIndex(const GridDiagram& g, const Domain2Chain& d, const State& x, const State& y);

int countMarkX(const Domain2Chain& d, const GridDiagram& g);  // n_z(D)
int countMarkO(const Domain2Chain& d, const GridDiagram& g);  // n_w(D)

// --- data-prep helpers -------------------------------------------------------

GridDiagram transposeGrid(const GridDiagram& g);    // swap rows and columns
GridDiagram mirrorGrid(const GridDiagram& g);       // reflect rows: mirror link
GridDiagram translateGrid(const GridDiagram& g, int dc, int dr);

}  // namespace gridfloer

#endif
