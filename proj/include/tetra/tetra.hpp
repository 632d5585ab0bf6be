#pragma once

#include "analysis.hpp"
#include "core.hpp"
#include "divpoor.hpp"
#include "export.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "stochastic.hpp"
