#pragma once

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/expr.hpp"
#include "fracshadow/fence.hpp"
#include "fracshadow/format.hpp"
#include "fracshadow/kinematics.hpp"
#include "fracshadow/operators.hpp"
#include "fracshadow/quad.hpp"
#include "fracshadow/timescale.hpp"
