#pragma once

#include <complex>
#include <span>

namespace phasespace::fft {

using cplx = std::complex<double>;

enum class Direction { Forward, Inverse };

// Unnormalized batched 1D transforms in place. Forward uses e^{-i...}, Inverse e^{+i...}.
// `count` transforms of length `n`; element j of transform t sits at data[t*dist + j*stride].
void many(std::span<cplx> data, int n, int count, int stride, int dist, Direction dir);

// Unnormalized 2D transform in place on a row-major rows x cols array.
void two_d(std::span<cplx> data, int rows, int cols, Direction dir);

}  // namespace phasespace::fft
