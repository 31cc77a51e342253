#pragma once

#include "plq/asymptotics.hpp"
#include "plq/error.hpp"
#include "plq/group_ops.hpp"
#include "plq/plmap.hpp"
#include "plq/rational.hpp"
#include "plq/suites.hpp"
#include "plq/textio.hpp"
#include "plq/witnesses.hpp"
