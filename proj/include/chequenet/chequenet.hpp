#pragma once

// Umbrella header: the whole library is header-only.

#include "chequenet/cheque.hpp"
#include "chequenet/contagion.hpp"
#include "chequenet/csv.hpp"
#include "chequenet/dot.hpp"
#include "chequenet/errors.hpp"
#include "chequenet/format.hpp"
#include "chequenet/generator.hpp"
#include "chequenet/network.hpp"
#include "chequenet/rational.hpp"
#include "chequenet/reports.hpp"
#include "chequenet/risk.hpp"
#include "chequenet/rng.hpp"
#include "chequenet/snapshot.hpp"
#include "chequenet/stats.hpp"
