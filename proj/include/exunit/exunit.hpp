#pragma once

#include "exunit/error.hpp"
#include "exunit/number_ring.hpp"
#include "exunit/ideal.hpp"
#include "exunit/residue.hpp"
#include "exunit/poly.hpp"
#include "exunit/parser.hpp"
#include "exunit/enumerate.hpp"
#include "exunit/variety.hpp"
#include "exunit/counting.hpp"
