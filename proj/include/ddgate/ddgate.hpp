#pragma once

#include "ddgate/pauli.hpp"
#include "ddgate/model.hpp"
#include "ddgate/sequence.hpp"
#include "ddgate/noise.hpp"
#include "ddgate/engine.hpp"
#include "ddgate/fidelity.hpp"
#include "ddgate/experiment.hpp"
#include "ddgate/verify.hpp"
