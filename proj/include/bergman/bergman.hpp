#pragma once

#include "bergman/ball.hpp"
#include "bergman/config.hpp"
#include "bergman/csv.hpp"
#include "bergman/describe.hpp"
#include "bergman/error.hpp"
#include "bergman/experiments.hpp"
#include "bergman/functionals.hpp"
#include "bergman/gauss.hpp"
#include "bergman/growth.hpp"
#include "bergman/holo.hpp"
#include "bergman/kernels.hpp"
#include "bergman/measures.hpp"
#include "bergman/pseudo_ball.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reinhardt.hpp"
#include "bergman/rng.hpp"
#include "bergman/slice.hpp"
