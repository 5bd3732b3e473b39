#ifndef EQPROX_EQPROX_HPP
#define EQPROX_EQPROX_HPP

#include "eqprox/bench.hpp"
#include "eqprox/constants.hpp"
#include "eqprox/core.hpp"
#include "eqprox/errors.hpp"
#include "eqprox/params.hpp"
#include "eqprox/prox.hpp"
#include "eqprox/solver.hpp"

#endif  // EQPROX_EQPROX_HPP
