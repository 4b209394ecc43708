#pragma once

#include "gamow/config.hpp"
#include "gamow/csv.hpp"
#include "gamow/error.hpp"
#include "gamow/faddeeva.hpp"
#include "gamow/initial_state.hpp"
#include "gamow/m_function.hpp"
#include "gamow/piecewise_wave.hpp"
#include "gamow/pole_finder.hpp"
#include "gamow/potential.hpp"
#include "gamow/propagation.hpp"
#include "gamow/quadrature.hpp"
#include "gamow/resonance_basis.hpp"
#include "gamow/scattering.hpp"
#include "gamow/scenario.hpp"
#include "gamow/survival.hpp"
#include "gamow/units.hpp"
#include "gamow/version.hpp"
