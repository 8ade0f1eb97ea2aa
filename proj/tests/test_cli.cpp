#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <phasespace/duality.hpp>
#include <phasespace/error.hpp>
#include <phasespace/states.hpp>

#include "phasesim/commands.hpp"
#include "phasesim/config.hpp"
#include "phasesim/eigen_dir.hpp"
#include "phasesim/psfield.hpp"
#include "support.hpp"

using namespace phasespace;
using namespace phasesim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("phasesim_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path operator/(const std::string& name) const { return path / name; }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double value_of(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return std::stod(line.substr(key.size() + 1));
  FAIL("missing key " << key);
  return 0;
}

const char* kGridSection =
    "[grid]\nnq = 128\nnp = 128\nq_min = -8\nq_max = 8\np_min = -8\np_max = 8\n[model]\nhbar = 1\n";

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(line);
  return rows;
}

double last_column(const std::string& row) { return std::stod(row.substr(row.rfind(',') + 1)); }

}  // namespace

TEST_CASE("PSFIELD round trip") {
  std::mt19937_64 rng(41);
  const PhaseField f = testing::random_band_limited(make_grid(16, 8, -1.25, 3.5, -0.1, 0.7), rng).with_role(FieldRole::Effect);
  const PhaseField back = parse_psfield(format_psfield(f));
  CHECK(back == f);
  CHECK(back.grid() == f.grid());
  CHECK(back.role() == FieldRole::Effect);

  const std::string text = format_psfield(f);
  CHECK(text.rfind("PSFIELD 1\nnq=16 np=8\nq_min=-1.25 q_max=3.5 p_min=-0.10000000000000001 p_max=0.69999999999999996\nrole=effect\n", 0) == 0);
  CHECK_THROWS_AS(parse_psfield("PSFIELD 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_psfield(text.substr(0, text.size() - 30)), ValidationError);
  CHECK_THROWS_AS(read_psfield("/nonexistent/x.psf"), IoError);
}

TEST_CASE("config parsing") {
  const IniFile ini = IniFile::parse("# c\n[grid]\nnq = 32 # trailing\n\n[kernel]\ntype=nodes\nnodes = 1:1, 0.5:2\n");
  CHECK(ini.get_int("grid", "nq") == 32);
  const auto nodes = parse_nodes(ini.get("kernel", "nodes"));
  REQUIRE(nodes.size() == 2);
  CHECK(nodes[1].k == 0.5);
  CHECK(nodes[1].weight == 2.0);
  CHECK_THROWS_AS(IniFile::parse("[grid]\nnqq = 3\n"), ValidationError);
  CHECK_THROWS_AS(IniFile::parse("[gird]\n"), ValidationError);
  CHECK_THROWS_AS(IniFile::parse("nq = 3\n"), ValidationError);
  CHECK_THROWS_AS(IniFile::parse("[grid]\nnq = 3\nnq = 4\n"), ValidationError);
  CHECK_THROWS_AS(IniFile::parse("[grid]\nnq = abc\n").get_int("grid", "nq"), ValidationError);
}

TEST_CASE("transform and volume") {
  TempDir dir;
  write(dir / "g.cfg", kGridSection);
  const Run a = run({"transform", "--ho-n", "0", "--config", (dir / "g.cfg").string(), "--out", (dir / "w0.psf").string()});
  REQUIRE(a.code == 0);
  CHECK(std::abs(value_of(a.out, "V") - 6.2832) <= 1e-3);
  CHECK(std::abs(value_of(a.out, "integral") - 1) <= 1e-8);
  run({"transform", "--ho-n", "0", "--config", (dir / "g.cfg").string(), "--out", (dir / "w0b.psf").string()});
  CHECK(slurp(dir / "w0.psf") == slurp(dir / "w0b.psf"));

  CHECK(run({"transform", "--ho-n", "0", "--config", (dir / "missing.cfg").string(), "--out", (dir / "x.psf").string()})
            .code == kExitValidation);
  CHECK(run({"transform", "--config", (dir / "g.cfg").string(), "--out", (dir / "x.psf").string()}).code ==
        kExitValidation);
  CHECK(run({"volume", "--in", (dir / "nothere.psf").string()}).code == kExitIo);
  CHECK(run({"frobnicate"}).code == kExitValidation);

  // Wavefunction file: the ground state as complex pairs.
  const PhaseGrid g = make_grid(128, 128, -8, 8, -8, 8);
  const Wavefunction psi = ho_wavefunction(0, q_axis(g));
  std::ostringstream pairs;
  pairs.precision(17);
  for (const cplx& z : psi.values) pairs << z.real() << "," << z.imag() << "\n";
  write(dir / "psi.txt", pairs.str());
  REQUIRE(run({"transform", "--psi", (dir / "psi.txt").string(), "--config", (dir / "g.cfg").string(), "--out",
               (dir / "wpsi.psf").string()})
              .code == 0);
  CHECK(max_abs_difference(read_psfield(dir / "wpsi.psf"), read_psfield(dir / "w0.psf")) <= 1e-15);

  run({"transform", "--ho-n", "1", "--config", (dir / "g.cfg").string(), "--out", (dir / "w1.psf").string()});
  REQUIRE(run({"mix", "--in", (dir / "w0.psf").string(), "--in", (dir / "w1.psf").string(), "--weight", "0.5", "--weight",
               "0.5", "--out", (dir / "mix.psf").string()})
              .code == 0);
  const Run v0 = run({"volume", "--in", (dir / "w0.psf").string()});
  const Run vm = run({"volume", "--in", (dir / "mix.psf").string()});
  CHECK(std::abs(value_of(v0.out, "V") - 6.2832) <= 1e-3);
  CHECK(std::abs(value_of(vm.out, "V") - 12.566) <= 1e-2);
}

TEST_CASE("measure and hamiltonian") {
  TempDir dir;
  write(dir / "g.cfg", kGridSection);
  const std::string cfg = (dir / "g.cfg").string();
  REQUIRE(run({"eigenstates", "--config", cfg, "--ho-nmax", "12", "--out", (dir / "eig").string()}).code == 0);
  const EigenstateSet set = read_eigenstate_dir(dir / "eig");
  CHECK(set.size() == 13);
  CHECK(set[3].energy == 3.5);

  run({"transform", "--ho-n", "0", "--config", cfg, "--out", (dir / "w0.psf").string()});
  const Run m0 = run({"measure", "--state", (dir / "w0.psf").string(), "--eigenstates", (dir / "eig").string()});
  REQUIRE(m0.code == 0);
  const auto rows = csv_rows(m0.out);
  REQUIRE(rows.size() == 15);
  CHECK(rows[0] == "index,energy,volume,probability");
  CHECK(std::abs(last_column(rows[1]) - 1) <= 1e-6);
  for (int n = 1; n <= 12; ++n) CHECK(std::abs(last_column(rows[n + 1])) <= 1e-6);
  CHECK(rows[14].rfind("TOTAL,,,", 0) == 0);

  // |alpha|^2 = 1 coherent state: Poisson(1) weights e^{-1} / n!.
  write_psfield(dir / "coh.psf", coherent_state(make_grid(128, 128, -8, 8, -8, 8), std::sqrt(2.0), 0));
  REQUIRE(run({"measure", "--state", (dir / "coh.psf").string(), "--eigenstates", (dir / "eig").string(), "--out",
               (dir / "coh.csv").string()})
              .code == 0);
  const auto crow = csv_rows(slurp(dir / "coh.csv"));
  double factorial = 1;
  for (int n = 0; n <= 8; ++n) {
    if (n > 0) factorial *= n;
    CAPTURE(n);
    CHECK(std::abs(last_column(crow[n + 1]) - std::exp(-1.0) / factorial) <= 1e-4);
  }
  CHECK(std::abs(last_column(crow.back()) - 1) <= 1e-3);

  TempDir wide;
  write(wide / "g.cfg", "[grid]\nnq = 192\nnp = 192\nq_min = -12\nq_max = 12\np_min = -12\np_max = 12\n");
  run({"transform", "--ho-n", "0", "--config", (wide / "g.cfg").string(), "--out", (wide / "w0.psf").string()});
  const Run h = run({"hamiltonian", "--config", (wide / "g.cfg").string(), "--ho-nmax", "40", "--out",
                     (wide / "h.psf").string(), "--state", (wide / "w0.psf").string()});
  REQUIRE(h.code == 0);
  CHECK(std::abs(value_of(h.out, "energy") - 0.5) <= 1e-4);
  CHECK(read_psfield(wide / "h.psf").role() == FieldRole::Observable);
}

TEST_CASE("evolve writes a trajectory directory") {
  TempDir dir;
  const std::string base = "[grid]\nnq = 64\nnp = 64\nq_min = -8\nq_max = 8\np_min = -8\np_max = 8\n";
  write(dir / "classical.cfg", base +
                                   "[kernel]\ntype = classical\n[hamiltonian]\ntype = ho\n"
                                   "[initial]\ntype = gaussian\nq0 = 2\np0 = 0\nsigma_q = 0.5\nsigma_p = 0.5\n"
                                   "[evolve]\nt_final = 1.5707963267948966\ndt = 0.001\nsnapshot_stride = 500\n"
                                   "[output]\ndir = traj\n");
  REQUIRE(run({"evolve", "--config", (dir / "classical.cfg").string()}).code == 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir / "traj")) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  REQUIRE(names.size() == 6);
  CHECK(names[0] == "diagnostics.csv");
  CHECK(names[1] == "snap_000000_t=0.000000000.psf");
  CHECK(names[5] == "snap_000004_t=1.570796327.psf");

  const PhaseField last = read_psfield(dir / "traj" / names[5]);
  const auto c = testing::centroid(last);
  CHECK(std::abs(c.q) <= last.grid().dq());
  CHECK(std::abs(c.p + 2) <= last.grid().dp());

  const auto diag = csv_rows(slurp(dir / "traj" / "diagnostics.csv"));
  REQUIRE(diag.size() == 6);
  CHECK(diag[0] == "t,norm,inner_self,energy");
  for (std::size_t r = 1; r < diag.size(); ++r) {
    const double norm = std::stod(diag[r].substr(diag[r].find(',') + 1));
    CHECK(std::abs(norm - 1) <= 1e-6);
  }

  write(dir / "zero.cfg", base +
                              "[hamiltonian]\ntype = zero\n"
                              "[initial]\ntype = gaussian\nq0 = 0.5\np0 = -0.5\nsigma_q = 0.7\nsigma_p = 0.6\n"
                              "[evolve]\nt_final = 1\ndt = 0.1\nsnapshot_stride = 2\n[output]\ndir = zero\n");
  REQUIRE(run({"evolve", "--config", (dir / "zero.cfg").string()}).code == 0);
  const std::string first = slurp(dir / "zero" / "snap_000000_t=0.000000000.psf");
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir / "zero")) {
    if (e.path().extension() != ".psf") continue;
    ++count;
    CHECK(slurp(e.path()) == first);
  }
  CHECK(count == 6);

  write(dir / "unstable.cfg", base +
                                  "[kernel]\ntype = classical\n[hamiltonian]\ntype = ho\n"
                                  "[initial]\ntype = gaussian\nq0 = 2\np0 = 0\nsigma_q = 0.5\nsigma_p = 0.5\n"
                                  "[evolve]\nt_final = 5\ndt = 1.5\n[output]\ndir = unstable\n");
  CHECK(run({"evolve", "--config", (dir / "unstable.cfg").string()}).code == kExitInstability);
  CHECK_FALSE(fs::exists(dir / "unstable"));

  write(dir / "bad.cfg", base + "[evolve]\nt_final = 1\ndt = -1\n[initial]\ntype = gaussian\n");
  CHECK(run({"evolve", "--config", (dir / "bad.cfg").string()}).code == kExitValidation);
}

TEST_CASE("check command") {
  const fs::path configs = PHASESIM_CONFIG_DIR;
  const Run q = run({"check", "--config", (configs / "quantum_ho_32.ini").string()});
  CHECK(q.code == 0);
  CHECK(value_of(q.out, "antisymmetry") <= 1e-10);
  CHECK(run({"check", "--config", (configs / "classical_ho_32.ini").string()}).code == 0);
  CHECK(run({"check", "--config", (configs / "two_node_ho_32.ini").string()}).code == 0);
  const Run c = run({"check", "--config", (configs / "quantum_ho_32.ini").string(), "--cosine-control"});
  CHECK(c.code == kExitInvariant);
  CHECK(value_of(c.out, "j_skew") > 0.1);
}
