#pragma once

// Umbrella header: symbolic-numeric analysis of Fuchsian operators, their
// monodromy, and the extension class attached to an inhomogeneous equation
// op(h) = g.
//
// Layering (each header includes the ones above it):
//   numerics, errors       basic types, configuration, exceptions
//   polynomial, rational   dense complex polynomials and rational functions
//   operator               differential operators: compose, normalize, pullback
//   singular               singular points, exponents, Fuchs criterion
//   parse                  textual operator grammar
//   path, companion        polyline geometry; first-order companion systems
//   continuation           Taylor-series analytic continuation with error bounds
//   monodromy              loop planning, monodromy matrices, admissibility
//   extension              extension cocycles (two routes) and coboundary tests
//   report, driver         JSON reports; end-to-end pipelines for the CLI

#include "pfext/driver.hpp"
