// SPDX-License-Identifier: Apache-2.0

#ifndef MILAC_MILAC_HPP
#define MILAC_MILAC_HPP

#include "milac/beamforming_sets.hpp"
#include "milac/channels.hpp"
#include "milac/experiments.hpp"
#include "milac/linalg.hpp"
#include "milac/network.hpp"
#include "milac/oracle.hpp"
#include "milac/power_allocation.hpp"
#include "milac/random.hpp"
#include "milac/rates.hpp"
#include "milac/selftest.hpp"
#include "milac/simplex.hpp"
#include "milac/stationarity.hpp"
#include "milac/wmmse.hpp"

#endif // MILAC_MILAC_HPP
