#pragma once

#include "dampcheck/core.hpp"
#include "dampcheck/analytic.hpp"
#include "dampcheck/dynamics.hpp"
#include "dampcheck/invariants.hpp"
#include "dampcheck/fieldmap.hpp"
#include "dampcheck/error_demo.hpp"
