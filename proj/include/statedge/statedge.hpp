#pragma once

// Umbrella header.

#include "statedge/detectors.hpp"
#include "statedge/eval.hpp"
#include "statedge/image.hpp"
#include "statedge/io.hpp"
#include "statedge/median.hpp"
#include "statedge/noise.hpp"
