#pragma once

#include <filesystem>

#include <phasespace/eigenstates.hpp>

namespace phasesim {

// Directory layout:
//   index.csv      header `index,energy,volume,file`, one row per state
//   state_<n>.psf  PSFIELD files named in the file column (relative to the directory)
void write_eigenstate_dir(const std::filesystem::path& dir, const phasespace::EigenstateSet& set);
phasespace::EigenstateSet read_eigenstate_dir(const std::filesystem::path& dir);

}  // namespace phasesim
