#pragma once

#include "chains.hpp"
#include "errors.hpp"
#include "grid_set.hpp"
#include "io.hpp"
#include "lipschitz.hpp"
#include "metric_space.hpp"
#include "parallel.hpp"
#include "porosity.hpp"
#include "rug.hpp"
#include "tolerance.hpp"
#include "version.hpp"
