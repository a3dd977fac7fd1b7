#pragma once

#include "compdm/aggregation.hpp"
#include "compdm/clustering.hpp"
#include "compdm/composition.hpp"
#include "compdm/dispersion.hpp"
#include "compdm/errors.hpp"
#include "compdm/hypothesis.hpp"
#include "compdm/io.hpp"
