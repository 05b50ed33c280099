// thicklab/thicklab.hpp — umbrella header.

#pragma once

#include "thicklab/auerbach.hpp"
#include "thicklab/cli.hpp"
#include "thicklab/convex.hpp"
#include "thicklab/covering.hpp"
#include "thicklab/dimension_fit.hpp"
#include "thicklab/embedding.hpp"
#include "thicklab/ensemble.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/exponent.hpp"
#include "thicklab/io.hpp"
#include "thicklab/kuratowski.hpp"
#include "thicklab/point_cloud.hpp"
#include "thicklab/rng.hpp"
#include "thicklab/sequences.hpp"
#include "thicklab/sigma.hpp"
#include "thicklab/sparse_vector.hpp"
#include "thicklab/subspace.hpp"
#include "thicklab/thickness.hpp"
