#pragma once

#include "adversary.hpp"
#include "bench.hpp"
#include "domain.hpp"
#include "elicit.hpp"
#include "generate.hpp"
#include "oracle.hpp"
#include "verify.hpp"
