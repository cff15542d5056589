#pragma once

#include "qembed/anneal.hpp"
#include "qembed/errors.hpp"
#include "qembed/ga.hpp"
#include "qembed/model.hpp"
#include "qembed/rng.hpp"
#include "qembed/spectrum.hpp"
