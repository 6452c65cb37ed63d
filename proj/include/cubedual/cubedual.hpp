#pragma once
// Umbrella header.

#include "cubedual/common.hpp"
#include "cubedual/complex.hpp"
#include "cubedual/complex_ops.hpp"
#include "cubedual/cube_key.hpp"
#include "cubedual/cubical.hpp"
#include "cubedual/diagram_io.hpp"
#include "cubedual/duality.hpp"
#include "cubedual/image.hpp"
#include "cubedual/persistence.hpp"
#include "cubedual/random.hpp"
#include "cubedual/transform.hpp"
#include "cubedual/verify.hpp"
