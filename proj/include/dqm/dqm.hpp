#pragma once

#include "dqm/quaternion.hpp"
#include "dqm/quat_matrix.hpp"
#include "dqm/dual_quat_matrix.hpp"
#include "dqm/solve_outcome.hpp"
#include "dqm/two_sided.hpp"
#include "dqm/dual_system.hpp"
#include "dqm/special_cases.hpp"
