#ifndef GRIDFLOER_CHECKS_HPP
#define GRIDFLOER_CHECKS_HPP

#include "gridfloer/homology.hpp"
#include "gridfloer/moves.hpp"

namespace gridfloer {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int maxPower = 3;           // U-power window for the non-equivariant identities
  std::size_t sampleCount = 10000;
  int maxN = 9;
  bool chainLevel = true;     // false: homology-level comparisons only
};

// d^2 = 0 in all three coefficient systems.
std::vector<CheckResult> differentialChecks(const GridDiagram& g, const SuiteOptions& opt);

// Commutators of the differential with psi_{i,j} and phi_{i,j}.
std::vector<CheckResult> commutatorChecks(const ChainComplex& c, const SuiteOptions& opt);

// psi phi + phi psi, psi^2, phi^2 against their homotopies.
std::vector<CheckResult> homotopyLemmaChecks(const ChainComplex& c, const SuiteOptions& opt);

// psi_i phi_i = [d, H_i] with the non-equivariant homotopy, on U^m x.
std::vector<CheckResult> trivialityChecks(const ChainComplex& c, const SuiteOptions& opt);

// Change-of-special-marking identities on the minus complex: every f_{j,j'}
// is a chain map, the K and wrap homotopies satisfy their displayed
// commutators, and f_{last,first} f_{first,last} + Id + phi psi is the
// commutator of the assembled homotopy.
std::vector<CheckResult> changeSpecialChecks(const ChainComplex& c, const SuiteOptions& opt);

// Commutation, stabilization and destabilization maps: chain-map property,
// the exact stabilize/destabilize round trip, and the homology-level
// inverse for commutations.
std::vector<CheckResult> moveChecks(const GridDiagram& g, const SuiteOptions& opt);

// The basepoint pipeline against c phi psi (cases 1 and 2 at chain level)
// and the full cycle against Id + phi psi on hat homology.
std::vector<CheckResult> pipelineChecks(const GridDiagram& superstabilized,
                                        const SuiteOptions& opt);
CheckResult pipelineStepCheck(const GridDiagram& g, int comp, int j, const SuiteOptions& opt);

// Everything above for one grid.
std::vector<CheckResult> identitySuite(const GridDiagram& g, const SuiteOptions& opt);

}  // namespace gridfloer

#endif
