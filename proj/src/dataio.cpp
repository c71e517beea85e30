#include "steercert/dataio.hpp"
