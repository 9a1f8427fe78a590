#ifndef WREATH_WREATH_HPP
#define WREATH_WREATH_HPP

#include "artifact.hpp"
#include "construct.hpp"
#include "coord_action.hpp"
#include "error.hpp"
#include "groups.hpp"
#include "permutation.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "sofic.hpp"
#include "verify.hpp"
#include "wreath_product.hpp"

#endif  // WREATH_WREATH_HPP
