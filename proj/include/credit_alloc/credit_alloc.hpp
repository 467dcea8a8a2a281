#pragma once

#include "credit.hpp"
#include "ranking.hpp"
#include "reporting.hpp"
