#pragma once

// Exact joint CDFs of order statistics from one, two, or many populations.

#include "ostat/bench.hpp"
#include "ostat/combinatorics.hpp"
#include "ostat/distributions.hpp"
#include "ostat/error.hpp"
#include "ostat/oracle.hpp"
#include "ostat/orderstats.hpp"
#include "ostat/permanent.hpp"
#include "ostat/problem_spec.hpp"
#include "ostat/query.hpp"
#include "ostat/rng.hpp"
#include "ostat/summation.hpp"
#include "ostat/verify.hpp"
