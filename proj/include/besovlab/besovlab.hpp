#pragma once

// Umbrella header: spectral toolkit for dyadic frequency analysis and a
// pseudo-spectral integrator for damped compressible flow on the torus.

#include "besovlab/version.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/grid.hpp"
#include "besovlab/fft.hpp"
#include "besovlab/field.hpp"
#include "besovlab/operators.hpp"
#include "besovlab/dyadic.hpp"
#include "besovlab/norms.hpp"
#include "besovlab/paraproduct.hpp"
#include "besovlab/params.hpp"
#include "besovlab/euler.hpp"
#include "besovlab/linear_modes.hpp"
#include "besovlab/synthesis.hpp"
#include "besovlab/diagnostics.hpp"
#include "besovlab/simulate.hpp"
#include "besovlab/estimates.hpp"
#include "besovlab/io.hpp"
#include "besovlab/presets.hpp"
