#pragma once

#include "aestruct/bilinear.hpp"
#include "aestruct/catalog.hpp"
#include "aestruct/classify.hpp"
#include "aestruct/connections.hpp"
#include "aestruct/dual.hpp"
#include "aestruct/error.hpp"
#include "aestruct/expr.hpp"
#include "aestruct/rng.hpp"
#include "aestruct/structure.hpp"
#include "aestruct/tensor.hpp"
#include "aestruct/verify.hpp"
