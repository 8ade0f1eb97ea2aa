#include "phasespace/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"
#include "phasespace/exact_sum.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Mixed coefficients of g below this fraction of its largest coefficient are treated as
// zero, so separable sources built from 1D profiles skip the O(N^3) path.
constexpr double kMixedDropTolerance = 1e-15;

int wrap(int s, int n) { return ((s % n) + n) % n; }

double wavevector(int s, double extent) { return kTwoPi * s / extent; }

}  // namespace

PhaseField ComplexField::real() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx c) { return c.real(); });
  return PhaseField(grid, std::move(out));
}

PhaseField ComplexField::imag() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [](cplx c) { return c.imag(); });
  return PhaseField(grid, std::move(out));
}

// ---------------------------------------------------------------------------
// PoissonOperator

namespace {

// Band-limited derivative modes of `m` placed on a zero-padded pad_q x pad_p array and
// synthesized there. which = 0 for d/dq, 1 for d/dp.
std::vector<cplx> padded_derivative(const ModeArray& m, int hq, int hp, int pad_q, int pad_p, int which) {
  const PhaseGrid& g = m.grid;
  std::vector<cplx> buf(static_cast<std::size_t>(pad_q) * pad_p, 0.0);
  for (int a = -hq; a <= hq; ++a) {
    const double u = wavevector(a, g.q_extent());
    for (int b = -hp; b <= hp; ++b) {
      const double v = wavevector(b, g.p_extent());
      const cplx c = m(wrap(a, g.nq()), wrap(b, g.np()));
      buf[static_cast<std::size_t>(wrap(a, pad_q)) * pad_p + wrap(b, pad_p)] = cplx(0.0, which == 0 ? u : v) * c;
    }
  }
  fft::two_d(buf, pad_q, pad_p, fft::Direction::Inverse);
  return buf;
}

}  // namespace

PoissonOperator::PoissonOperator(const PhaseField& g)
    : grid_(g.grid()),
      hq_((g.grid().nq() - 1) / 2),
      hp_((g.grid().np() - 1) / 2),
      pad_q_(2 * g.grid().nq()),
      pad_p_(2 * g.grid().np()) {
  const ModeArray gm = mode_transform(g);
  const auto dq = padded_derivative(gm, hq_, hp_, pad_q_, pad_p_, 0);
  const auto dp = padded_derivative(gm, hq_, hp_, pad_q_, pad_p_, 1);
  gq_.resize(dq.size());
  gp_.resize(dp.size());
  for (std::size_t x = 0; x < dq.size(); ++x) {
    gq_[x] = dq[x].real();
    gp_[x] = dp[x].real();
  }
}

PhaseField PoissonOperator::bracket_modes(const ModeArray& fm) const {
  require_same_grid(grid_, fm.grid);
  const auto fq = padded_derivative(fm, hq_, hp_, pad_q_, pad_p_, 0);
  const auto fp = padded_derivative(fm, hq_, hp_, pad_q_, pad_p_, 1);
  std::vector<cplx> prod(fq.size());
  for (std::size_t x = 0; x < prod.size(); ++x) prod[x] = fq[x].real() * gp_[x] - fp[x].real() * gq_[x];
  fft::two_d(prod, pad_q_, pad_p_, fft::Direction::Forward);
  const double scale = 1.0 / (static_cast<double>(pad_q_) * pad_p_);
  ModeArray out{grid_, std::vector<cplx>(grid_.size(), 0.0)};
  for (int a = -hq_; a <= hq_; ++a)
    for (int b = -hp_; b <= hp_; ++b)
      out(wrap(a, grid_.nq()), wrap(b, grid_.np())) =
          prod[static_cast<std::size_t>(wrap(a, pad_q_)) * pad_p_ + wrap(b, pad_p_)] * scale;
  return inverse_mode_transform(out);
}

PhaseField PoissonOperator::bracket(const PhaseField& f) const { return bracket_modes(mode_transform(f)); }

PhaseField poisson_bracket(const PhaseField& f, const PhaseField& g) {
  require_same_grid(f.grid(), g.grid());
  return PoissonOperator(g).bracket(f);
}

// ---------------------------------------------------------------------------
// BracketOperator

BracketOperator::BracketOperator(const PhaseField& g, double k)
    : grid_(g.grid()),
      k_(k),
      hq_((g.grid().nq() - 1) / 2),
      hp_((g.grid().np() - 1) / 2),
      pad_q_(2 * g.grid().nq()),
      pad_p_(2 * g.grid().np()) {
  if (!std::isfinite(k)) throw ValidationError("bracket action must be finite");
  const ModeArray gm = mode_transform(g);
  const int nq = grid_.nq();
  const int np = grid_.np();
  const int na = 2 * hq_ + 1;
  const int nb = 2 * hp_ + 1;
  const double Lq = grid_.q_extent();
  const double Lp = grid_.p_extent();
  const auto coeff = [&](int a, int b) { return gm(wrap(a, nq), wrap(b, np)); };

  double largest = 0.0;
  for (int a = -hq_; a <= hq_; ++a)
    for (int b = -hp_; b <= hp_; ++b) largest = std::max(largest, std::abs(coeff(a, b)));

  // Pure-q part (b2 = 0, including the constant mode): sigma = -v1 u2.
  for (int a = -hq_; a <= hq_; ++a) has_q_ = has_q_ || coeff(a, 0) != 0.0;
  if (has_q_) {
    table_q_.assign(static_cast<std::size_t>(nb) * pad_q_, 0.0);
    for (int b1 = -hp_; b1 <= hp_; ++b1) {
      cplx* row = &table_q_[static_cast<std::size_t>(b1 + hp_) * pad_q_];
      const double v1 = wavevector(b1, Lp);
      for (int a2 = -hq_; a2 <= hq_; ++a2) {
        row[wrap(a2, pad_q_)] = coeff(a2, 0) * std::polar(1.0, 0.5 * k * v1 * wavevector(a2, Lq));
      }
    }
    fft::many(table_q_, pad_q_, nb, 1, pad_q_, fft::Direction::Inverse);
  }

  // Pure-p part (a2 = 0, b2 != 0): sigma = u1 v2.
  for (int b = -hp_; b <= hp_; ++b) has_p_ = has_p_ || (b != 0 && coeff(0, b) != 0.0);
  if (has_p_) {
    table_p_.assign(static_cast<std::size_t>(na) * pad_p_, 0.0);
    for (int a1 = -hq_; a1 <= hq_; ++a1) {
      cplx* row = &table_p_[static_cast<std::size_t>(a1 + hq_) * pad_p_];
      const double u1 = wavevector(a1, Lq);
      for (int b2 = -hp_; b2 <= hp_; ++b2) {
        if (b2 == 0) continue;
        row[wrap(b2, pad_p_)] = coeff(0, b2) * std::polar(1.0, -0.5 * k * u1 * wavevector(b2, Lp));
      }
    }
    fft::many(table_p_, pad_p_, na, 1, pad_p_, fft::Direction::Inverse);
  }

  // Mixed part (a2 != 0, b2 != 0).
  const double drop = kMixedDropTolerance * largest;
  for (int a2 = -hq_; a2 <= hq_; ++a2) {
    if (a2 == 0) continue;
    bool active = false;
    for (int b2 = -hp_; b2 <= hp_ && !active; ++b2) active = b2 != 0 && std::abs(coeff(a2, b2)) > drop;
    if (active) mixed_rows_.push_back(a2);
  }
  if (!mixed_rows_.empty()) {
    const std::size_t rows = mixed_rows_.size();
    table_mixed_.assign(rows * na * pad_p_, 0.0);
    mixed_phase_.resize(rows * nb);
    for (std::size_t r = 0; r < rows; ++r) {
      const int a2 = mixed_rows_[r];
      const double u2 = wavevector(a2, Lq);
      for (int b1 = -hp_; b1 <= hp_; ++b1) {
        mixed_phase_[r * nb + (b1 + hp_)] = std::polar(1.0, 0.5 * k * wavevector(b1, Lp) * u2);
      }
      for (int a1 = -hq_; a1 <= hq_; ++a1) {
        cplx* row = &table_mixed_[(r * na + (a1 + hq_)) * pad_p_];
        const double u1 = wavevector(a1, Lq);
        for (int b2 = -hp_; b2 <= hp_; ++b2) {
          if (b2 == 0) continue;
          row[wrap(b2, pad_p_)] = coeff(a2, b2) * std::polar(1.0, -0.5 * k * u1 * wavevector(b2, Lp));
        }
      }
    }
    fft::many(table_mixed_, pad_p_, static_cast<int>(rows) * na, 1, pad_p_, fft::Direction::Inverse);
  }
}

ModeArray BracketOperator::star_modes(const ModeArray& fm) const {
  require_same_grid(grid_, fm.grid);
  const int nq = grid_.nq();
  const int np = grid_.np();
  const int na = 2 * hq_ + 1;
  const int nb = 2 * hp_ + 1;
  ModeArray out{grid_, std::vector<cplx>(grid_.size(), 0.0)};
  const auto fcoeff = [&](int a, int b) { return fm(wrap(a, nq), wrap(b, np)); };

  if (has_q_) {
    // For each f p-mode b1: 1D linear convolution along q with the b1-dependent kernel.
    std::vector<cplx> buf(static_cast<std::size_t>(nb) * pad_q_, 0.0);
    for (int b1 = -hp_; b1 <= hp_; ++b1) {
      cplx* row = &buf[static_cast<std::size_t>(b1 + hp_) * pad_q_];
      for (int a1 = -hq_; a1 <= hq_; ++a1) row[wrap(a1, pad_q_)] = fcoeff(a1, b1);
    }
    fft::many(buf, pad_q_, nb, 1, pad_q_, fft::Direction::Inverse);
    for (std::size_t x = 0; x < buf.size(); ++x) buf[x] *= table_q_[x];
    fft::many(buf, pad_q_, nb, 1, pad_q_, fft::Direction::Forward);
    const double scale = 1.0 / pad_q_;
    for (int b1 = -hp_; b1 <= hp_; ++b1) {
      const cplx* row = &buf[static_cast<std::size_t>(b1 + hp_) * pad_q_];
      for (int U = -hq_; U <= hq_; ++U) out(wrap(U, nq), wrap(b1, np)) += row[wrap(U, pad_q_)] * scale;
    }
  }

  if (has_p_) {
    std::vector<cplx> buf(static_cast<std::size_t>(na) * pad_p_, 0.0);
    for (int a1 = -hq_; a1 <= hq_; ++a1) {
      cplx* row = &buf[static_cast<std::size_t>(a1 + hq_) * pad_p_];
      for (int b1 = -hp_; b1 <= hp_; ++b1) row[wrap(b1, pad_p_)] = fcoeff(a1, b1);
    }
    fft::many(buf, pad_p_, na, 1, pad_p_, fft::Direction::Inverse);
    for (std::size_t y = 0; y < buf.size(); ++y) buf[y] *= table_p_[y];
    fft::many(buf, pad_p_, na, 1, pad_p_, fft::Direction::Forward);
    const double scale = 1.0 / pad_p_;
    for (int a1 = -hq_; a1 <= hq_; ++a1) {
      const cplx* row = &buf[static_cast<std::size_t>(a1 + hq_) * pad_p_];
      for (int V = -hp_; V <= hp_; ++V) out(wrap(a1, nq), wrap(V, np)) += row[wrap(V, pad_p_)] * scale;
    }
  }

  if (!mixed_rows_.empty()) {
    // acc[U][y] = sum_{a1 + a2 = U} F(a1; p_y + k u2 / 2) G(a2; p_y - k u1 / 2) on the padded p axis.
    std::vector<cplx> acc(static_cast<std::size_t>(na) * pad_p_, 0.0);
    std::vector<cplx> shifted(static_cast<std::size_t>(na) * pad_p_);
    for (std::size_t r = 0; r < mixed_rows_.size(); ++r) {
      const int a2 = mixed_rows_[r];
      const cplx* phase = &mixed_phase_[r * nb];
      std::fill(shifted.begin(), shifted.end(), cplx(0.0));
      for (int a1 = -hq_; a1 <= hq_; ++a1) {
        cplx* row = &shifted[static_cast<std::size_t>(a1 + hq_) * pad_p_];
        for (int b1 = -hp_; b1 <= hp_; ++b1) row[wrap(b1, pad_p_)] = fcoeff(a1, b1) * phase[b1 + hp_];
      }
      fft::many(shifted, pad_p_, na, 1, pad_p_, fft::Direction::Inverse);
      const int a1_lo = std::max(-hq_, -hq_ - a2);
      const int a1_hi = std::min(hq_, hq_ - a2);
      for (int a1 = a1_lo; a1 <= a1_hi; ++a1) {
        const cplx* frow = &shifted[static_cast<std::size_t>(a1 + hq_) * pad_p_];
        const cplx* grow = &table_mixed_[(r * na + (a1 + hq_)) * pad_p_];
        cplx* arow = &acc[static_cast<std::size_t>(a1 + a2 + hq_) * pad_p_];
        for (int y = 0; y < pad_p_; ++y) arow[y] += frow[y] * grow[y];
      }
    }
    fft::many(acc, pad_p_, na, 1, pad_p_, fft::Direction::Forward);
    const double scale = 1.0 / pad_p_;
    for (int U = -hq_; U <= hq_; ++U) {
      const cplx* row = &acc[static_cast<std::size_t>(U + hq_) * pad_p_];
      for (int V = -hp_; V <= hp_; ++V) out(wrap(U, nq), wrap(V, np)) += row[wrap(V, pad_p_)] * scale;
    }
  }
  return out;
}

std::vector<cplx> BracketOperator::star(const PhaseField& f) const {
  return inverse_mode_transform_complex(star_modes(mode_transform(f)));
}

PhaseField BracketOperator::apply_modes(const ModeArray& f_modes, BracketKind kind) const {
  const auto s = inverse_mode_transform_complex(star_modes(f_modes));
  std::vector<double> values(s.size());
  // Real inputs and a symmetric band give S(-k) = conj(S(k)), so
  // sin-kernel = (S(-k) - S(k)) / 2i = -Im S and cos-kernel = Re S.
  if (kind == BracketKind::Sine) {
    std::transform(s.begin(), s.end(), values.begin(), [](cplx c) { return -c.imag(); });
  } else {
    std::transform(s.begin(), s.end(), values.begin(), [](cplx c) { return c.real(); });
  }
  return PhaseField(grid_, std::move(values));
}

PhaseField BracketOperator::apply(const PhaseField& f, BracketKind kind) const {
  return apply_modes(mode_transform(f), kind);
}

PhaseField BracketOperator::sine(const PhaseField& f) const { return apply(f, BracketKind::Sine); }

// ---------------------------------------------------------------------------
// Free functions

PhaseField sine_bracket(const PhaseField& f, const PhaseField& g, double k) {
  require_same_grid(f.grid(), g.grid());
  if (!(k >= 0)) throw ValidationError("sine bracket action k must be nonnegative");
  return BracketOperator(g, k).sine(f);
}

ComplexField star_product(const PhaseField& f, const PhaseField& g, double k) {
  require_same_grid(f.grid(), g.grid());
  return ComplexField{f.grid(), BracketOperator(g, k).star(f)};
}

PhaseField brute_force_sine_bracket(const PhaseField& f, const PhaseField& g, double k) {
  require_same_grid(f.grid(), g.grid());
  if (!(k >= 0)) throw ValidationError("sine bracket action k must be nonnegative");
  const PhaseGrid& grid = f.grid();
  if (grid.size() > 4096) throw ValidationError("brute-force bracket is limited to nq*np <= 4096");
  const int nq = grid.nq();
  const int np = grid.np();
  const int hq = (nq - 1) / 2;
  const int hp = (np - 1) / 2;
  const int na = 2 * hq + 1;
  const int nb = 2 * hp + 1;

  // Naive DFT twiddles e^{-2 pi i s m / n}, independent of the FFT backend.
  std::vector<cplx> tq(static_cast<std::size_t>(na) * nq);
  std::vector<cplx> tp(static_cast<std::size_t>(nb) * np);
  for (int a = -hq; a <= hq; ++a)
    for (int i = 0; i < nq; ++i) tq[static_cast<std::size_t>(a + hq) * nq + i] = std::polar(1.0, -kTwoPi * a * i / nq);
  for (int b = -hp; b <= hp; ++b)
    for (int j = 0; j < np; ++j) tp[static_cast<std::size_t>(b + hp) * np + j] = std::polar(1.0, -kTwoPi * b * j / np);

  const auto dft = [&](const PhaseField& h) {
    std::vector<cplx> c(static_cast<std::size_t>(na) * nb, 0.0);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        cplx acc = 0.0;
        for (int i = 0; i < nq; ++i) {
          cplx row = 0.0;
          for (int j = 0; j < np; ++j) row += h(i, j) * tp[static_cast<std::size_t>(b) * np + j];
          acc += row * tq[static_cast<std::size_t>(a) * nq + i];
        }
        c[static_cast<std::size_t>(a) * nb + b] = acc * scale;
      }
    return c;
  };
  const auto fc = dft(f);
  const auto gc = dft(g);

  const double Lq = grid.q_extent();
  const double Lp = grid.p_extent();
  // Correctly rounded accumulation per output mode: swapping f and g negates every term, so the
  // result is negated exactly whatever the visiting order.
  std::vector<ExactAccumulator> out_re(static_cast<std::size_t>(na) * nb);
  std::vector<ExactAccumulator> out_im(static_cast<std::size_t>(na) * nb);
  for (int a1 = -hq; a1 <= hq; ++a1)
    for (int b1 = -hp; b1 <= hp; ++b1) {
      const cplx f1 = fc[static_cast<std::size_t>(a1 + hq) * nb + (b1 + hp)];
      for (int a2 = -hq; a2 <= hq; ++a2) {
        const int U = a1 + a2;
        if (U < -hq || U > hq) continue;
        for (int b2 = -hp; b2 <= hp; ++b2) {
          const int V = b1 + b2;
          if (V < -hp || V > hp) continue;
          const double sigma = wavevector(a1, Lq) * wavevector(b2, Lp) - wavevector(b1, Lp) * wavevector(a2, Lq);
          const cplx term = f1 * gc[static_cast<std::size_t>(a2 + hq) * nb + (b2 + hp)] * std::sin(0.5 * k * sigma);
          const std::size_t o = static_cast<std::size_t>(U + hq) * nb + (V + hp);
          out_re[o].add(term.real());
          out_im[o].add(term.imag());
        }
      }
    }

  std::vector<cplx> out(out_re.size());
  for (std::size_t o = 0; o < out.size(); ++o) out[o] = {out_re[o].value(), out_im[o].value()};

  PhaseField result(grid, FieldRole::Observable);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) {
      cplx acc = 0.0;
      for (int a = 0; a < na; ++a) {
        cplx row = 0.0;
        for (int b = 0; b < nb; ++b) row += out[static_cast<std::size_t>(a) * nb + b] * std::conj(tp[static_cast<std::size_t>(b) * np + j]);
        acc += row * std::conj(tq[static_cast<std::size_t>(a) * nq + i]);
      }
      result(i, j) = acc.real();
    }
  return result;
}

}  // namespace phasespace
