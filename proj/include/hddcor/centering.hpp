#pragma once

#include "hddcor/sample.hpp"

namespace hddcor {

// Entry (k, l) is the Euclidean distance between rows k and l of x.
DistanceMatrix pairwise_distances(const SampleMatrix& x);

// A_{k,l} = a_{k,l} - row mean - column mean + grand mean. Every row and
// column of the result sums to zero.
CenteredDistanceMatrix double_center(const DistanceMatrix& d);

// U-centering with the 1/(n-2) and 1/((n-1)(n-2)) weights. The diagonal is
// set to zero; every off-diagonal row sum vanishes. Requires n >= 4.
CenteredDistanceMatrix u_center(const DistanceMatrix& d);

// Largest |row sum| or |column sum| (off-diagonal only for UCentered),
// divided by max(1, max |entry|). Used by invariant checks.
double centering_residual(const CenteredDistanceMatrix& c);

}  // namespace hddcor
