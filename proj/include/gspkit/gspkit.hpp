#pragma once

#include "gspkit/error.hpp"
#include "gspkit/filters.hpp"
#include "gspkit/graph.hpp"
#include "gspkit/inverse.hpp"
#include "gspkit/jacobi.hpp"
#include "gspkit/kernels.hpp"
#include "gspkit/random.hpp"
#include "gspkit/spectral.hpp"
#include "gspkit/stochastic.hpp"
#include "gspkit/timevertex.hpp"
#include "gspkit/topology.hpp"
#include "gspkit/types.hpp"
