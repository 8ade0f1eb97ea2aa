#include "phasesim/eigen_dir.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <phasespace/error.hpp>

#include "phasesim/psfield.hpp"

namespace phasesim {

using namespace phasespace;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw IoError(where + ": malformed number '" + text + "'");
  return v;
}

}  // namespace

void write_eigenstate_dir(const std::filesystem::path& dir, const EigenstateSet& set) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  std::ostringstream index;
  index << "index,energy,volume,file\n";
  char buf[160];
  for (std::size_t n = 0; n < set.size(); ++n) {
    const std::string name = "state_" + std::to_string(n) + ".psf";
    write_psfield(dir / name, set[n].g);
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", n, set[n].energy, set[n].volume);
    index << buf << name << "\n";
  }
  std::ofstream out(dir / "index.csv", std::ios::binary);
  out << index.str();
  if (!out) throw IoError("cannot write '" + (dir / "index.csv").string() + "'");
}

EigenstateSet read_eigenstate_dir(const std::filesystem::path& dir) {
  const auto index_path = dir / "index.csv";
  std::ifstream in(index_path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + index_path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "index,energy,volume,file") {
    throw IoError(index_path.string() + ": expected header 'index,energy,volume,file'");
  }
  EigenstateSet set;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = index_path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw IoError(where + ": expected 4 columns");
    const double energy = parse_number(cells[1], where);
    const double volume = parse_number(cells[2], where);
    set.add(read_psfield(dir / cells[3]), energy, volume);
  }
  if (set.empty()) throw ValidationError(index_path.string() + ": no eigenstates listed");
  return set;
}

}  // namespace phasesim
