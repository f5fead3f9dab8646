// Everything at once.
#pragma once

#include "event_model.hpp"
#include "record_io.hpp"
#include "perspective.hpp"
#include "trace.hpp"
#include "metrics.hpp"
#include "prover.hpp"
#include "oracle.hpp"
#include "synth.hpp"
#include "eval.hpp"
#include "verify.hpp"
