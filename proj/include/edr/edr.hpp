#pragma once

#include "edr/bounds.hpp"
#include "edr/errors.hpp"
#include "edr/estimators.hpp"
#include "edr/fock.hpp"
#include "edr/instruments.hpp"
#include "edr/linalg.hpp"
#include "edr/qubit.hpp"
#include "edr/rng.hpp"
#include "edr/sweep.hpp"
