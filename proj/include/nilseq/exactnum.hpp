#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/bigint.hpp"
#include "nilseq/exactnum/entropy.hpp"
#include "nilseq/exactnum/int_matrix.hpp"
#include "nilseq/exactnum/integral_polynomial.hpp"
#include "nilseq/exactnum/phase_evaluator.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"
#include "nilseq/exactnum/poly.hpp"
#include "nilseq/exactnum/roots.hpp"
