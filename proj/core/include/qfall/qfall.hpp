#pragma once

#include "qfall/composite.hpp"
#include "qfall/dynamics.hpp"
#include "qfall/errors.hpp"
#include "qfall/lattice.hpp"
#include "qfall/phasespace.hpp"
#include "qfall/qubitphase.hpp"
#include "qfall/states.hpp"
#include "qfall/units.hpp"
#include "qfall/version.hpp"
