#pragma once

// Umbrella header: micro-objective tasks over finite episodic MDPs, DFA
// event monitors, exact and Monte Carlo policy evaluation, partial-order
// frontier search, reductions from reward-based RL, worked examples, and the
// command-line entry point.

#include "cli.hpp"
#include "common.hpp"
#include "engine.hpp"
#include "evaluate.hpp"
#include "frontier.hpp"
#include "gallery.hpp"
#include "json_io.hpp"
#include "mdp.hpp"
#include "monitor.hpp"
#include "order.hpp"
#include "policy.hpp"
#include "reductions.hpp"
#include "rng.hpp"
#include "task.hpp"
