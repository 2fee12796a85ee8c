#pragma once

#include "conditions.hpp"
#include "gcd.hpp"
#include "laurent.hpp"
#include "liapunov.hpp"
#include "linsolve.hpp"
#include "mpoly.hpp"
#include "numeric.hpp"
#include "ode.hpp"
#include "parser.hpp"
#include "perturb.hpp"
#include "qhomog.hpp"
#include "ratfunc.hpp"
#include "report.hpp"
#include "structure.hpp"
#include "system.hpp"
#include "univariate.hpp"
#include "vartable.hpp"
