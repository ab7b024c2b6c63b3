#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "fft.hpp"
#include "nonlocal.hpp"
#include "models.hpp"
#include "schemes.hpp"
#include "solver.hpp"
#include "diagnostics.hpp"
#include "config.hpp"
#include "io.hpp"
#include "bench.hpp"
