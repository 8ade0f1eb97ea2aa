#pragma once

#include <filesystem>
#include <string>

#include <phasespace/phase_grid.hpp>

namespace phasesim {

// PSFIELD 1 text format:
//   PSFIELD 1
//   nq=<int> np=<int>
//   q_min=<v> q_max=<v> p_min=<v> p_max=<v>
//   role=<density|effect|observable>
//   nq rows of np comma-separated values, %.16e
std::string format_psfield(const phasespace::PhaseField& f);
phasespace::PhaseField parse_psfield(const std::string& text, const std::string& origin = "<memory>");

void write_psfield(const std::filesystem::path& path, const phasespace::PhaseField& f);
phasespace::PhaseField read_psfield(const std::filesystem::path& path);

}  // namespace phasesim
