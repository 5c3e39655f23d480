#pragma once

// Umbrella header: peptide ingestion, the reference keyword automaton, the
// bit-split machines, tile packing, emitters, and the tile simulator.

#include "pepfsm/amino.hpp"
#include "pepfsm/aho_corasick.hpp"
#include "pepfsm/bitsplit.hpp"
#include "pepfsm/digest.hpp"
#include "pepfsm/emit.hpp"
#include "pepfsm/errors.hpp"
#include "pepfsm/fasta.hpp"
#include "pepfsm/id_set.hpp"
#include "pepfsm/peptide.hpp"
#include "pepfsm/plan_io.hpp"
#include "pepfsm/sim.hpp"
#include "pepfsm/tilepack.hpp"
#include "pepfsm/version.hpp"
