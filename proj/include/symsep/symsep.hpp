#pragma once

#include "symsep/core.hpp"
#include "symsep/decompose.hpp"
#include "symsep/groundstate.hpp"
#include "symsep/json_io.hpp"
#include "symsep/ops.hpp"
#include "symsep/random.hpp"
#include "symsep/range.hpp"
#include "symsep/symmetric.hpp"
#include "symsep/witness.hpp"
