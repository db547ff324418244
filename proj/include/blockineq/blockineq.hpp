#pragma once

#include "core.hpp"
#include "linalg.hpp"
#include "random.hpp"
#include "block.hpp"
#include "witness.hpp"
#include "checks.hpp"
#include "extremal.hpp"
#include "corpus.hpp"
#include "io.hpp"
