#ifndef PELLABEL_PELLABEL_HPP
#define PELLABEL_PELLABEL_HPP

// Umbrella header: the whole library.
//
// The equation P^2 - D Q^2 = c on a totally real hyperelliptic curve
// y^2 = D(x) is decided and solved through the periods of the canonical
// differential of the curve, and curves are rebuilt from combinatorial comb
// data by solving the conformal-map parameter problem on those same periods.

#include "pellabel/applications.hpp"
#include "pellabel/canonical.hpp"
#include "pellabel/comb_inverse.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/pell.hpp"
#include "pellabel/poly.hpp"
#include "pellabel/quadrature.hpp"
#include "pellabel/svg.hpp"

#endif
