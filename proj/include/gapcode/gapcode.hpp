#pragma once

#include "gapcode/capacity.hpp"
#include "gapcode/conjugacy.hpp"
#include "gapcode/errors.hpp"
#include "gapcode/eventually_periodic_set.hpp"
#include "gapcode/factor_code.hpp"
#include "gapcode/gap_shift.hpp"
#include "gapcode/graph.hpp"
#include "gapcode/linear_feasibility.hpp"
#include "gapcode/oracle.hpp"
#include "gapcode/spoke.hpp"
