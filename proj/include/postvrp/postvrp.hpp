#ifndef POSTVRP_POSTVRP_HPP
#define POSTVRP_POSTVRP_HPP

#include "core.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "instance.hpp"
#include "md5.hpp"
#include "metric.hpp"
#include "model.hpp"
#include "random.hpp"
#include "render.hpp"
#include "sampling.hpp"
#include "solver.hpp"
#include "synthetic.hpp"

#endif
