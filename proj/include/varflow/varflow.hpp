#pragma once

#include "varflow/errors.hpp"
#include "varflow/net_model.hpp"
#include "varflow/cut_bounds.hpp"
#include "varflow/stability.hpp"
#include "varflow/gf256.hpp"
#include "varflow/rlnc.hpp"
#include "varflow/simulator.hpp"
#include "varflow/config.hpp"
#include "varflow/commands.hpp"
