#pragma once

#include "minisvm/dataset.hpp"
#include "minisvm/linalg.hpp"
#include "minisvm/objectives.hpp"
#include "minisvm/rng.hpp"
#include "minisvm/run.hpp"
#include "minisvm/sampler.hpp"
#include "minisvm/solvers.hpp"
#include "minisvm/synth.hpp"
#include "minisvm/trace.hpp"
