#include "gridfloer/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridfloer/homology.hpp"
#include "json.hpp"

namespace gridfloer {

using nlohmann::json;

CatalogEntry loadEntry(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  CatalogEntry e;
  e.sourceFile = path;
  e.grid = GridDiagram::parse(text);
  json j = json::parse(text);
  if (j.contains("name")) e.name = j["name"].get<std::string>();
  if (e.name.empty()) e.name = std::filesystem::path(path).stem().string();
  if (j.contains("alexander")) e.alexander = j["alexander"].get<std::vector<long long>>();
  if (j.contains("signature")) e.signature = j["signature"].get<int>();
  if (j.contains("expected_h")) e.expectedH = j["expected_h"].get<std::string>();
  if (j.contains("expected_r")) e.expectedR = j["expected_r"].get<std::string>();

  if (!e.alexander.empty() && e.grid.numComponents == 1) {
    std::vector<long long> det = alexanderFromWinding(e.grid);
    if (det != e.alexander)
      fail(Err::ValidationError,
           e.name + ": stored Alexander coefficients disagree with the grid determinant");
  }
  return e;
}

std::vector<CatalogEntry> loadCatalog(const std::string& dir) {
  std::vector<std::string> files;
  for (auto& p : std::filesystem::directory_iterator(dir))
    if (p.path().extension() == ".json") files.push_back(p.path().string());
  std::sort(files.begin(), files.end());
  std::vector<CatalogEntry> out;
  for (auto& f : files) out.push_back(loadEntry(f));
  return out;
}

}  // namespace gridfloer
