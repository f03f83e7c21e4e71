#pragma once

#include "maxent/core.hpp"
#include "maxent/entropy.hpp"
#include "maxent/quadrature.hpp"
#include "maxent/risk.hpp"
#include "maxent/solver.hpp"
#include "maxent/utility.hpp"
#include "maxent/utility_vector.hpp"
