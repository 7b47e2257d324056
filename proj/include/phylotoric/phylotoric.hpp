#pragma once

// Umbrella header: the whole library except the command-line front end
// (phylotoric/cli.hpp), which only executables should pull in.

#include "phylotoric/abelian_group.hpp"
#include "phylotoric/int_matrix.hpp"
#include "phylotoric/integers.hpp"
#include "phylotoric/lattice.hpp"
#include "phylotoric/model.hpp"
#include "phylotoric/rational_lp.hpp"
#include "phylotoric/serialize.hpp"
#include "phylotoric/tree.hpp"
#include "phylotoric/verify.hpp"
