#pragma once

#include "rkm/attack.hpp"
#include "rkm/bounds.hpp"
#include "rkm/csv.hpp"
#include "rkm/experiments.hpp"
#include "rkm/kernels.hpp"
#include "rkm/krr.hpp"
#include "rkm/matrix.hpp"
#include "rkm/parallel.hpp"
#include "rkm/prng.hpp"
#include "rkm/sampling.hpp"
#include "rkm/spectral.hpp"
