#pragma once

#include "zaslab/elliptic.hpp"
#include "zaslab/errors.hpp"
#include "zaslab/geometry.hpp"
#include "zaslab/imcf.hpp"
#include "zaslab/io.hpp"
#include "zaslab/limits.hpp"
#include "zaslab/mass.hpp"
#include "zaslab/profile.hpp"
#include "zaslab/quadrature.hpp"
#include "zaslab/report.hpp"
#include "zaslab/scenario.hpp"
#include "zaslab/spline.hpp"
#include "zaslab/verify.hpp"
