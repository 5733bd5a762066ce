#pragma once

#include <random>

#include "hberry/sampling.hpp"

namespace hberry::testing {

using hberry::constant_loop;
using hberry::cosine_loop;
using hberry::latitude_loop;
using hberry::random_loop;
using hberry::random_parameter_set;
using hberry::uniform;

}  // namespace hberry::testing
