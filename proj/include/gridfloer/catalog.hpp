#ifndef GRIDFLOER_CATALOG_HPP
#define GRIDFLOER_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "gridfloer/grid.hpp"

namespace gridfloer {

struct CatalogEntry {
  std::string name;
  GridDiagram grid;
  std::vector<long long> alexander;  // symmetrized, lowest degree first; may be empty
  std::optional<int> signature;
  std::string expectedH, expectedR;  // canonical polynomial text; empty when unpinned
  std::string sourceFile;
};

CatalogEntry loadEntry(const std::string& path);

// Loads every *.json in the directory.  Structural validation plus the
// winding-determinant Alexander check against the stored coefficients; the
// homology-route checks run in the report pipeline.
std::vector<CatalogEntry> loadCatalog(const std::string& dir);

}  // namespace gridfloer

#endif
