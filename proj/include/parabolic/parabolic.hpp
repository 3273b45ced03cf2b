#pragma once

#include "parabolic/catalogue.hpp"
#include "parabolic/error.hpp"
#include "parabolic/field.hpp"
#include "parabolic/fixed_points.hpp"
#include "parabolic/flow.hpp"
#include "parabolic/growth.hpp"
#include "parabolic/higher_deriv.hpp"
#include "parabolic/interval.hpp"
#include "parabolic/jet.hpp"
#include "parabolic/lognumber.hpp"
#include "parabolic/map.hpp"
#include "parabolic/polynomial.hpp"
#include "parabolic/series.hpp"
#include "parabolic/szekeres.hpp"
#include "parabolic/watanabe.hpp"
