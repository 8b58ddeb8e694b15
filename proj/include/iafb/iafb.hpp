#pragma once

#include "iafb/channel.hpp"
#include "iafb/codebook.hpp"
#include "iafb/linalg.hpp"
#include "iafb/rng.hpp"
#include "iafb/rxdesign.hpp"
#include "iafb/sim.hpp"
#include "iafb/theory.hpp"
#include "iafb/txdesign.hpp"
