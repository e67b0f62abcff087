// nmcavity.hpp — Umbrella header

#pragma once

#include "nmcavity/config.hpp"
#include "nmcavity/dynamics.hpp"
#include "nmcavity/error.hpp"
#include "nmcavity/propagator.hpp"
#include "nmcavity/quadrature.hpp"
#include "nmcavity/rates.hpp"
#include "nmcavity/simulation.hpp"
#include "nmcavity/spectral.hpp"
#include "nmcavity/warning.hpp"
