#include "doctest.h"
#include "steercert/certify.hpp"

TEST_SUITE("certify") {}
