#pragma once

#include "bgc/vector.hpp"
#include "bgc/spaces.hpp"
#include "bgc/orthogonality.hpp"
#include "bgc/search.hpp"
#include "bgc/constants.hpp"
#include "bgc/verify.hpp"
#include "bgc/csv.hpp"
