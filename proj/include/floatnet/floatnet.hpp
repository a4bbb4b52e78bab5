#pragma once

// Umbrella header.
#include "floatnet/arith.hpp"
#include "floatnet/bigint.hpp"
#include "floatnet/bits.hpp"
#include "floatnet/constructors.hpp"
#include "floatnet/dyadic.hpp"
#include "floatnet/enumerate.hpp"
#include "floatnet/errors.hpp"
#include "floatnet/format.hpp"
#include "floatnet/funcexpr.hpp"
#include "floatnet/lemmas.hpp"
#include "floatnet/network.hpp"
#include "floatnet/rational.hpp"
#include "floatnet/round.hpp"
#include "floatnet/suites.hpp"
#include "floatnet/text.hpp"
#include "floatnet/value.hpp"
#include "floatnet/verifier.hpp"
