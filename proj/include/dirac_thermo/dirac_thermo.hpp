#pragma once

#include "dirac_thermo/arena.hpp"
#include "dirac_thermo/constraints.hpp"
#include "dirac_thermo/differentiation.hpp"
#include "dirac_thermo/dirac.hpp"
#include "dirac_thermo/dual.hpp"
#include "dirac_thermo/dynamics.hpp"
#include "dirac_thermo/legendre.hpp"
#include "dirac_thermo/model.hpp"
#include "dirac_thermo/systems.hpp"
#include "dirac_thermo/types.hpp"
#include "dirac_thermo/verification.hpp"
