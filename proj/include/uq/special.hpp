#pragma once

namespace uq {

// Digamma psi(x), x > 0. Recurrence up to x >= 6 then asymptotic series;
// absolute error below 1e-12 on the domain used here.
double digamma(double x);

// Trigamma psi'(x), x > 0. Same scheme.
double trigamma(double x);

}  // namespace uq
