#include "doctest.h"
#include "steercert/randomness.hpp"

TEST_SUITE("randomness") {}
