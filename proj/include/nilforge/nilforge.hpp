#pragma once

// Umbrella header for the whole library.

#include "nilforge/cli.hpp"
#include "nilforge/dga.hpp"
#include "nilforge/dsl.hpp"
#include "nilforge/exterior.hpp"
#include "nilforge/lattice.hpp"
#include "nilforge/linalg.hpp"
#include "nilforge/massey.hpp"
#include "nilforge/quadext.hpp"
#include "nilforge/rational.hpp"
#include "nilforge/symmetry.hpp"
