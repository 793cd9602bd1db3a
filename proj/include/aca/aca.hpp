#pragma once

#include "aca/bench.hpp"
#include "aca/commutativity.hpp"
#include "aca/gadgets.hpp"
#include "aca/history.hpp"
#include "aca/io.hpp"
#include "aca/marching.hpp"
#include "aca/network.hpp"
#include "aca/render.hpp"
#include "aca/rule.hpp"
#include "aca/schedule.hpp"
#include "aca/trajectory.hpp"
#include "aca/types.hpp"
