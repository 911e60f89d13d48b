#pragma once

#include "prisms.hpp"
#include "brownian.hpp"
#include "equilibria.hpp"
#include "errors.hpp"
#include "integrate.hpp"
#include "interaction.hpp"
#include "model.hpp"
#include "nullclines.hpp"
#include "params.hpp"
#include "sde.hpp"
#include "state.hpp"
#include "time_grid.hpp"
#include "trajectory.hpp"
