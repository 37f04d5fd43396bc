#pragma once

#include "nilseq/torus/torus.hpp"
#include "nilseq/torus/weyl.hpp"
