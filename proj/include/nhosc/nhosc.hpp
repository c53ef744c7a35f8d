#pragma once

#include "nhosc/brodygraefe.hpp"
#include "nhosc/errors.hpp"
#include "nhosc/gmetric.hpp"
#include "nhosc/linalg2.hpp"
#include "nhosc/model.hpp"
#include "nhosc/oracle.hpp"
#include "nhosc/probability_quad.hpp"
#include "nhosc/units.hpp"
