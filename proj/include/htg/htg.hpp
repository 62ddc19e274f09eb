#pragma once

#include "htg/contour.hpp"
#include "htg/cursors.hpp"
#include "htg/dual.hpp"
#include "htg/filters.hpp"
#include "htg/generators.hpp"
#include "htg/grid.hpp"
#include "htg/hypertree.hpp"
#include "htg/indexing.hpp"
#include "htg/io.hpp"
#include "htg/marching.hpp"
#include "htg/polydata.hpp"
