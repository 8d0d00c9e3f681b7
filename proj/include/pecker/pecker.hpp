#pragma once

// Umbrella header for the bug-localization toolchain: HDL frontend, dependency
// graph, cycle-accurate simulation, propagation analysis, ranking, bench.

#include "pecker/ast.hpp"
#include "pecker/bench.hpp"
#include "pecker/design.hpp"
#include "pecker/diag.hpp"
#include "pecker/empc.hpp"
#include "pecker/eval.hpp"
#include "pecker/lexer.hpp"
#include "pecker/localizer.hpp"
#include "pecker/parser.hpp"
#include "pecker/pdg.hpp"
#include "pecker/signal_class.hpp"
#include "pecker/simulator.hpp"
#include "pecker/stimulus.hpp"
#include "pecker/stmt_table.hpp"
#include "pecker/trace.hpp"
