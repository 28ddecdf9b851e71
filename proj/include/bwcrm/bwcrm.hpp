#pragma once

#include "bwcrm/analysis.hpp"
#include "bwcrm/circumcenter.hpp"
#include "bwcrm/errors.hpp"
#include "bwcrm/geometry.hpp"
#include "bwcrm/matrix_market.hpp"
#include "bwcrm/problem.hpp"
#include "bwcrm/report.hpp"
#include "bwcrm/solver.hpp"
#include "bwcrm/types.hpp"
