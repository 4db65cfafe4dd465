#pragma once

#include "errors.hpp"
#include "polynomial.hpp"
#include "gcd.hpp"
#include "parser.hpp"
#include "groebner.hpp"
#include "polymatrix.hpp"
#include "matrix_io.hpp"
#include "qlinalg.hpp"
#include "criteria.hpp"
#include "reduce.hpp"
