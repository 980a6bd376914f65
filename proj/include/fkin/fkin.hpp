#ifndef FKIN_FKIN_HPP
#define FKIN_FKIN_HPP

#include "csv.hpp"
#include "errors.hpp"
#include "fractional_ops.hpp"
#include "grid.hpp"
#include "kinetic.hpp"
#include "mittag_leffler.hpp"
#include "special.hpp"
#include "verify.hpp"
#include "volterra.hpp"

#endif
