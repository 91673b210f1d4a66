#pragma once

#include "ncfield/counting.hpp"
#include "ncfield/error.hpp"
#include "ncfield/heteroclinic.hpp"
#include "ncfield/invariants.hpp"
#include "ncfield/json_io.hpp"
#include "ncfield/nc_tree.hpp"
#include "ncfield/polynomial.hpp"
#include "ncfield/quadratic.hpp"
#include "ncfield/realization.hpp"
#include "ncfield/svg.hpp"
#include "ncfield/ternary_tree.hpp"
#include "ncfield/trace.hpp"
