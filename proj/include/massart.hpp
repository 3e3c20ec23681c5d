#pragma once

#include "massart/core.hpp"
#include "massart/losses.hpp"
#include "massart/optimizer.hpp"
#include "massart/halfspace_learner.hpp"
#include "massart/bandit_learner.hpp"
#include "massart/environments.hpp"
#include "massart/settings.hpp"
#include "massart/harness.hpp"
