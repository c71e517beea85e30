#include "doctest.h"
#include "steercert/dataio.hpp"

TEST_SUITE("dataio") {}
