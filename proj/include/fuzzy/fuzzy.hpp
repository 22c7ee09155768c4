#pragma once

#include "fuzzy/error.hpp"
#include "fuzzy/rational.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/tnorm.hpp"
#include "fuzzy/space.hpp"
#include "fuzzy/covers.hpp"
#include "fuzzy/asdim.hpp"
#include "fuzzy/oracle.hpp"
#include "fuzzy/coarse.hpp"
#include "fuzzy/io.hpp"
