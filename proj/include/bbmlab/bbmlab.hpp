#pragma once

// Everything at once. Individual headers stay usable on their own.
#include <bbmlab/config.hpp>
#include <bbmlab/construction.hpp>
#include <bbmlab/dynamics.hpp>
#include <bbmlab/errors.hpp>
#include <bbmlab/fft.hpp>
#include <bbmlab/grid.hpp>
#include <bbmlab/inflation.hpp>
#include <bbmlab/oracles.hpp>
#include <bbmlab/parallel.hpp>
#include <bbmlab/quadrature.hpp>
#include <bbmlab/random.hpp>
#include <bbmlab/spaces.hpp>
#include <bbmlab/spectral_function.hpp>
#include <bbmlab/spectrum_io.hpp>

namespace bbm {
inline constexpr const char* kVersion = "0.1.0";
}
