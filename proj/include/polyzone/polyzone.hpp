#pragma once

// Umbrella header: the whole library.

#include "polyzone/error.hpp"
#include "polyzone/io.hpp"
#include "polyzone/maxmod.hpp"
#include "polyzone/operators.hpp"
#include "polyzone/poly.hpp"
#include "polyzone/regions.hpp"
#include "polyzone/roots.hpp"
#include "polyzone/verify.hpp"
