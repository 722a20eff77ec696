#pragma once

#include "safeplan/bench_domains.hpp"
#include "safeplan/compiler.hpp"
#include "safeplan/errors.hpp"
#include "safeplan/experiment.hpp"
#include "safeplan/learner.hpp"
#include "safeplan/model_io.hpp"
#include "safeplan/pac.hpp"
#include "safeplan/planner.hpp"
#include "safeplan/rng.hpp"
#include "safeplan/safety_audit.hpp"
#include "safeplan/sas.hpp"
