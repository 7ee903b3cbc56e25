#pragma once

#include "ecsgen/acceptance.hpp"
#include "ecsgen/analytic_protocol.hpp"
#include "ecsgen/coherent_algebra.hpp"
#include "ecsgen/config.hpp"
#include "ecsgen/errors.hpp"
#include "ecsgen/fock_space.hpp"
#include "ecsgen/propagator.hpp"
#include "ecsgen/protocol_runner.hpp"
#include "ecsgen/report_io.hpp"
