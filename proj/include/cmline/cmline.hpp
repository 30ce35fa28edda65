#pragma once

// Umbrella header.

#include <cmline/arith.hpp>
#include <cmline/bigfloat.hpp>
#include <cmline/collinear.hpp>
#include <cmline/cyclotomic.hpp>
#include <cmline/jfunction.hpp>
#include <cmline/lemma_suite.hpp>
#include <cmline/puiseux.hpp>
#include <cmline/qseries.hpp>
#include <cmline/quadratic_forms.hpp>
#include <cmline/rational_matrices.hpp>
#include <cmline/scanner.hpp>
#include <cmline/table1.hpp>
