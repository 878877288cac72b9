#pragma once

// Umbrella header for the workbench: precision-tracked p-adic arithmetic in
// Z_p and its cyclotomic Eisenstein extensions, truncated power series with
// Weierstrass preparation, completed-group-ring measures, binary quadratic
// form class groups, p-power-conductor Hecke characters, Rankin-Selberg
// central values, and the basechange degree bookkeeping.

#include "padiclab/basechange.hpp"
#include "padiclab/characters.hpp"
#include "padiclab/fixtures.hpp"
#include "padiclab/io.hpp"
#include "padiclab/iwasawa.hpp"
#include "padiclab/lfunction.hpp"
#include "padiclab/modform.hpp"
#include "padiclab/padic.hpp"
#include "padiclab/power_series.hpp"
#include "padiclab/quad_orders.hpp"
#include "padiclab/rng.hpp"
#include "padiclab/rootu.hpp"
