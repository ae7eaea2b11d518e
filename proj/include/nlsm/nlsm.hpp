#pragma once

#include "nlsm/errors.hpp"
#include "nlsm/spectra.hpp"
#include "nlsm/legendre.hpp"
#include "nlsm/fft.hpp"
#include "nlsm/transform.hpp"
#include "nlsm/random.hpp"
#include "nlsm/imethod.hpp"
#include "nlsm/solver.hpp"
#include "nlsm/strichartz.hpp"
#include "nlsm/locality.hpp"
#include "nlsm/tensorizer.hpp"
#include "nlsm/records.hpp"
#include "nlsm/config.hpp"
#include "nlsm/experiments.hpp"
