#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <phasespace/phase_grid.hpp>

namespace testing {

inline constexpr double kPi = std::numbers::pi;

/// Real field whose modes all lie within 1/divisor of the band on each axis. The default keeps
/// products of two such fields free of truncation.
inline phasespace::PhaseField random_band_limited(const phasespace::PhaseGrid& grid, std::mt19937_64& rng,
                                                  int divisor = 4) {
  std::normal_distribution<double> normal;
  phasespace::ModeArray modes{grid, std::vector<phasespace::cplx>(grid.size())};
  const int hq = (grid.nq() - 1) / divisor;
  const int hp = (grid.np() - 1) / divisor;
  for (int a = -hq; a <= hq; ++a)
    for (int b = -hp; b <= hp; ++b) {
      modes((a + grid.nq()) % grid.nq(), (b + grid.np()) % grid.np()) = {normal(rng), normal(rng)};
    }
  const auto values = phasespace::inverse_mode_transform_complex(modes);
  phasespace::PhaseField f(grid);
  for (std::size_t i = 0; i < values.size(); ++i) f.values()[i] = values[i].real();
  return f;
}

/// First moments of a density.
struct Centroid {
  double q;
  double p;
};

inline Centroid centroid(const phasespace::PhaseField& f) {
  const auto& g = f.grid();
  double m = 0, mq = 0, mp = 0;
  for (int i = 0; i < g.nq(); ++i)
    for (int j = 0; j < g.np(); ++j) {
      m += f(i, j);
      mq += f(i, j) * g.q(i);
      mp += f(i, j) * g.p(j);
    }
  return {mq / m, mp / m};
}

}  // namespace testing
