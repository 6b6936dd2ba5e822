#pragma once

#include "pdmnu/errors.hpp"
#include "pdmnu/model.hpp"
#include "pdmnu/nu_engine.hpp"
#include "pdmnu/oracle.hpp"
#include "pdmnu/polynomial.hpp"
#include "pdmnu/specfun.hpp"
#include "pdmnu/spectrum.hpp"
