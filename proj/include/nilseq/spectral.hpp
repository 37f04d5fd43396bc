#pragma once

#include "nilseq/spectral/decompose.hpp"
#include "nilseq/spectral/operator.hpp"
#include "nilseq/spectral/sparse_vector.hpp"
