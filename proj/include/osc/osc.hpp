#ifndef OSC_OSC_HPP
#define OSC_OSC_HPP

#include "osc/error.hpp"
#include "osc/predicates.hpp"
#include "osc/geom.hpp"
#include "osc/triangulate.hpp"
#include "osc/homotopy.hpp"
#include "osc/oscillation.hpp"
#include "osc/geodesic.hpp"
#include "osc/oracle.hpp"
#include "osc/maps.hpp"

#endif  // OSC_OSC_HPP
