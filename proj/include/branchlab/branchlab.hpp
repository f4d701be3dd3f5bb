#pragma once

#include "branchlab/numkernel.hpp"
#include "branchlab/branch.hpp"
#include "branchlab/carries.hpp"
#include "branchlab/lemmalab.hpp"
#include "branchlab/parallel.hpp"
#include "branchlab/syracuse.hpp"
#include "branchlab/cagrid.hpp"
#include "branchlab/io.hpp"
#include "branchlab/replay.hpp"
