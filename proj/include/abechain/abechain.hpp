#pragma once

// Umbrella header: the whole library in dependency order.

#include "dyadic.hpp"
#include "pauli.hpp"
#include "bell.hpp"
#include "stabilizer.hpp"
#include "density.hpp"
#include "ensemble.hpp"
#include "protocols.hpp"
#include "scenarios.hpp"
#include "verification.hpp"
#include "report.hpp"
