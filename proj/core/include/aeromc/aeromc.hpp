#pragma once

#include "aeromc/aero_dist.hpp"
#include "aeromc/aero_state.hpp"
#include "aeromc/coagulation.hpp"
#include "aeromc/constants.hpp"
#include "aeromc/diagnostics.hpp"
#include "aeromc/environment.hpp"
#include "aeromc/equilibrium.hpp"
#include "aeromc/error.hpp"
#include "aeromc/mie.hpp"
#include "aeromc/output.hpp"
#include "aeromc/particle.hpp"
#include "aeromc/scenario.hpp"
#include "aeromc/scenario_io.hpp"
#include "aeromc/species.hpp"
