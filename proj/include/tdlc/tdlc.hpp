#pragma once

// Umbrella header: the three families, the scale engine, the lattice
// harness, and the reporting plumbing.

#include "tdlc/affine.hpp"
#include "tdlc/battery.hpp"
#include "tdlc/config.hpp"
#include "tdlc/group.hpp"
#include "tdlc/lamplighter.hpp"
#include "tdlc/lattice.hpp"
#include "tdlc/parse_util.hpp"
#include "tdlc/perm3.hpp"
#include "tdlc/rational.hpp"
#include "tdlc/report.hpp"
#include "tdlc/rng.hpp"
#include "tdlc/scale.hpp"
#include "tdlc/sym3.hpp"
