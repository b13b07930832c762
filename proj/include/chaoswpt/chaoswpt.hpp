#pragma once

#include "chaoswpt/analytic.hpp"
#include "chaoswpt/channel.hpp"
#include "chaoswpt/chaos.hpp"
#include "chaoswpt/harvester.hpp"
#include "chaoswpt/montecarlo.hpp"
#include "chaoswpt/receiver.hpp"
#include "chaoswpt/rng.hpp"
#include "chaoswpt/verify.hpp"
#include "chaoswpt/waveform.hpp"
