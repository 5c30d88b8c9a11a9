#pragma once

#include "hypermap/bigint.hpp"
#include "hypermap/permutation.hpp"
#include "hypermap/collection.hpp"
#include "hypermap/nc_lattice.hpp"
#include "hypermap/polynomial.hpp"
#include "hypermap/whitney.hpp"
#include "hypermap/medial.hpp"
#include "hypermap/char_flow.hpp"
#include "hypermap/io.hpp"
