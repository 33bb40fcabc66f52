#pragma once

#include "netepi/dsl.hpp"
#include "netepi/population.hpp"

#include <string>

namespace netepi {

enum class EmitMode {
    /// First-order clauses over `time/1`, `person/1` and `airborne_contact/3`.
    Relational,
    /// Every clause instantiated for each individual and timestep.
    Grounded,
};

/// Human-readable probabilistic logic program equivalent to the model the
/// engine executes. One clause per line; output is byte-stable.
std::string emit_program(const ModelSpec& spec, const TemporalContactGraph& graph, EmitMode mode);

/// Prolog atom text for an identifier, quoted unless it is a plain
/// lowercase-initial alphanumeric atom.
std::string prolog_atom(std::string_view id);

} // namespace netepi
