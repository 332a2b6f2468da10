#pragma once

#include "sturm/errors.hpp"
#include "sturm/forge.hpp"
#include "sturm/liouville.hpp"
#include "sturm/matrix.hpp"
#include "sturm/metric.hpp"
#include "sturm/pencil.hpp"
