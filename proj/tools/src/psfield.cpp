#include "phasesim/psfield.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <phasespace/error.hpp>

namespace phasesim {

using phasespace::IoError;
using phasespace::PhaseField;
using phasespace::PhaseGrid;
using phasespace::ValidationError;

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ValidationError(where + ": not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  const double v = parse_double(s, where);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(where + ": not an integer: '" + s + "'");
  return static_cast<int>(v);
}

// Reads "key=value" tokens of one header line in the given order.
std::vector<std::string> header_values(const std::string& line, const std::vector<std::string>& keys,
                                       const std::string& where) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string token;
  for (const std::string& key : keys) {
    if (!(in >> token) || token.rfind(key + "=", 0) != 0) {
      throw ValidationError(where + ": expected '" + key + "=' in header line '" + line + "'");
    }
    out.push_back(token.substr(key.size() + 1));
  }
  if (in >> token) throw ValidationError(where + ": unexpected token '" + token + "' in header");
  return out;
}

}  // namespace

std::string format_psfield(const PhaseField& f) {
  const PhaseGrid& g = f.grid();
  std::string out = "PSFIELD 1\n";
  out += "nq=" + std::to_string(g.nq()) + " np=" + std::to_string(g.np()) + "\n";
  out += "q_min=" + number(g.q_min()) + " q_max=" + number(g.q_max()) + " p_min=" + number(g.p_min()) +
         " p_max=" + number(g.p_max()) + "\n";
  out += "role=" + std::string(phasespace::to_string(f.role())) + "\n";
  out.reserve(out.size() + g.size() * 24);
  char buf[40];
  for (int i = 0; i < g.nq(); ++i) {
    for (int j = 0; j < g.np(); ++j) {
      std::snprintf(buf, sizeof buf, "%.16e", f(i, j));
      if (j > 0) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

PhaseField parse_psfield(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  const auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw ValidationError(origin + ": truncated PSFIELD (missing " + what + ")");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next("magic");
  if (line != "PSFIELD 1") throw ValidationError(origin + ": not a PSFIELD 1 file");
  next("size line");
  const auto size = header_values(line, {"nq", "np"}, origin);
  const int nq = parse_int(size[0], origin);
  const int np = parse_int(size[1], origin);
  next("extent line");
  const auto ext = header_values(line, {"q_min", "q_max", "p_min", "p_max"}, origin);
  const PhaseGrid grid = phasespace::make_grid(nq, np, parse_double(ext[0], origin), parse_double(ext[1], origin),
                                               parse_double(ext[2], origin), parse_double(ext[3], origin));
  next("role line");
  const auto role = header_values(line, {"role"}, origin);

  std::vector<double> values;
  values.reserve(grid.size());
  for (int i = 0; i < nq; ++i) {
    next("data row");
    std::size_t start = 0;
    int count = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      values.push_back(parse_double(cell, origin + " row " + std::to_string(i)));
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (count != np) {
      throw ValidationError(origin + ": row " + std::to_string(i) + " has " + std::to_string(count) +
                            " values, expected " + std::to_string(np));
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") throw ValidationError(origin + ": trailing data after the last row");
  }
  return PhaseField(grid, std::move(values), phasespace::parse_role(role[0]));
}

void write_psfield(const std::filesystem::path& path, const PhaseField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = format_psfield(f);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PhaseField read_psfield(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_psfield(buf.str(), path.string());
}

}  // namespace phasesim
