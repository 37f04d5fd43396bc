#pragma once

#include "nilseq/mobius/reduction.hpp"
#include "nilseq/mobius/sieve.hpp"
#include "nilseq/mobius/statistics.hpp"
