#pragma once

#include "nilseq/nctorus/algebra.hpp"
#include "nilseq/nctorus/state.hpp"
