// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the thzsim library.
#pragma once

#include "thzsim/array_channel.hpp"
#include "thzsim/bandit.hpp"
#include "thzsim/beam_training.hpp"
#include "thzsim/codebook.hpp"
#include "thzsim/multihop_rate.hpp"
#include "thzsim/rng.hpp"
#include "thzsim/scenario.hpp"
#include "thzsim/simulate.hpp"
