#ifndef GRIDFLOER_MAPS_HPP
#define GRIDFLOER_MAPS_HPP

#include "gridfloer/complex.hpp"

namespace gridfloer {

// Basepoint maps on a grid complex.  Every map is evaluated per generator by
// scanning empty rectangles; coefficients are reduced modulo the complex's
// killed variables on output.

// psi_{i,j}: empty rectangles crossing exactly one X, namely z_{i,j};
// weighted by every O crossed.  Shift (-1, -e_i).
MapPtr psiIJ(const ChainComplex& c, int comp, int j);

// phi_{i,j}: empty rectangles crossing no X and crossing w_{i,j}; weighted by
// every O crossed except w_{i,j} itself.  Shift (+1, +e_i).
MapPtr phiIJ(const ChainComplex& c, int comp, int j);

// psi_i = sum_j psi_{i,j}; phi_i = phi_{i,s_i}.
MapPtr psiI(const ChainComplex& c, int comp);
MapPtr phiI(const ChainComplex& c, int comp);

// Id + psi_i phi_i (psiFirst=false gives Id + phi_i psi_i).
MapPtr involutionMap(const ChainComplex& c, int comp, bool psiOutside = true);

// The three equivariant homotopies pairing with psi_i phi_i + phi_i psi_i,
// psi_i^2 and phi_i^2.  h3 is identically zero on grid complexes.
struct HomotopyTriple {
  MapPtr h1, h2, h3;
};
HomotopyTriple homotopyLemmaMaps(const ChainComplex& c, int comp);

// Non-equivariant homotopy with psi_i phi_i = [d, H_i]; acts on U^m x through
// the parity of the special-variable exponent m.
MapPtr trivialityHomotopy(const ChainComplex& c, int comp);

// --- change of special marking -------------------------------------------------

// Relabeler c_{j,j'}: substitutes U_{i,j} := U_{i,j'} in the coefficient.
// A module map, not a chain map.
MapPtr substMap(const ChainComplex& src, const ChainComplex& dst, int fromVar, int toVar);

// K_{j,j'}: sends U_{i,j}^m x to the geometric sum in (U_{i,j}, U_{i,j'}).
MapPtr geomKMap(const ChainComplex& src, const ChainComplex& dst, int fromVar, int toVar);

struct ChangeSpecial {
  MapPtr relabel;       // c_{j,j'}
  MapPtr K;             // K_{j,j'}
  MapPtr f;             // the chain map c Phi_{i,j} sum_{J} Psi
  std::vector<int> J;   // z indices on the oriented arc from w_{i,j} to w_{i,j'}
};

// Requires canonical marking numbering (column pairs share an index).
ChangeSpecial changeSpecialMaps(const ChainComplex& c, int comp, int j, int jp);

// Homotopy H_j of the wrap-around identity: K_{j,j+1} psi_{1,j} Id c Phi (built
// by composition in callers); this helper provides the closing homotopy H that
// pairs Phi_{i,s} Psi_{i,last} + Psi_{i,last} Phi_{i,s} with the identity:
// rectangles through w_{i,wIdx} whose only X is z_{i,wIdx-1}.
MapPtr wrapHomotopy(const ChainComplex& c, int comp, int wIdx);

// Pipeline correction homotopy: rectangles containing both w_{i,j} and
// z_{i,j} with the z strictly north of the w inside the rectangle, the z
// being the only X crossed; weighted by every O crossed except w_{i,j}.
MapPtr columnPassHomotopy(const ChainComplex& c, int comp, int j);

}  // namespace gridfloer

#endif
