#pragma once

#include "cachemix/error.hpp"
#include "cachemix/random.hpp"
#include "cachemix/model.hpp"
#include "cachemix/policies.hpp"
#include "cachemix/workload.hpp"
#include "cachemix/chain.hpp"
#include "cachemix/rankmetrics.hpp"
#include "cachemix/mixing.hpp"
#include "cachemix/experiments.hpp"
#include "cachemix/version.hpp"
