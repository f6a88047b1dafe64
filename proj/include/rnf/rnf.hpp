#pragma once

#include "rnf/angles.hpp"
#include "rnf/box_count.hpp"
#include "rnf/compensated.hpp"
#include "rnf/content.hpp"
#include "rnf/continued_fraction.hpp"
#include "rnf/cover.hpp"
#include "rnf/error.hpp"
#include "rnf/farey.hpp"
#include "rnf/local_geometry.hpp"
#include "rnf/phase.hpp"
#include "rnf/rational.hpp"
#include "rnf/series.hpp"
#include "rnf/trace.hpp"
#include "rnf/version.hpp"
