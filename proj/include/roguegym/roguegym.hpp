#pragma once

#include "roguegym/config.hpp"
#include "roguegym/dungeon.hpp"
#include "roguegym/external_agent.hpp"
#include "roguegym/grid.hpp"
#include "roguegym/harness.hpp"
#include "roguegym/observe.hpp"
#include "roguegym/replay.hpp"
#include "roguegym/rng.hpp"
#include "roguegym/runtime.hpp"
#include "roguegym/tui.hpp"
#include "roguegym/version.hpp"
