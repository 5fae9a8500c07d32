#pragma once

#include "bj/config.hpp"
#include "bj/errors.hpp"
#include "bj/linalg.hpp"
#include "bj/operators.hpp"
#include "bj/orthogonality.hpp"
#include "bj/rng.hpp"
#include "bj/scalar_search.hpp"
#include "bj/space.hpp"
#include "bj/symmetry.hpp"
