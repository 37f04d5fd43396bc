#pragma once

#include "nilseq/sequences/constructors.hpp"
#include "nilseq/sequences/stream.hpp"
