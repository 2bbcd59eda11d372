#pragma once

#include "mopuc/cd.hpp"
#include "mopuc/json_io.hpp"
#include "mopuc/lattice.hpp"
#include "mopuc/linalg.hpp"
#include "mopuc/measures.hpp"
#include "mopuc/multi_index.hpp"
#include "mopuc/poly.hpp"
#include "mopuc/recurrence.hpp"
#include "mopuc/rng.hpp"
#include "mopuc/scalar.hpp"
#include "mopuc/szego.hpp"
