#pragma once

#include "bigreen/green.hpp"
#include "bigreen/oracles.hpp"
#include "bigreen/sym.hpp"
