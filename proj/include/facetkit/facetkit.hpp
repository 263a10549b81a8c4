#pragma once

#include "facetkit/linalg.hpp"
#include "facetkit/random.hpp"
#include "facetkit/oracle.hpp"
#include "facetkit/bodies.hpp"
#include "facetkit/json_io.hpp"
#include "facetkit/construct.hpp"
#include "facetkit/probe.hpp"
#include "facetkit/fractal.hpp"
#include "facetkit/mesh.hpp"
