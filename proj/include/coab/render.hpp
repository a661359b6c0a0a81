#pragma once

#include <string>

#include "coab/concepts.hpp"
#include "coab/registry.hpp"

namespace coab {

// `"name"` when the operation carries a display name, `#id` otherwise.
std::string render_op_ref(const Registry& reg, OperationId id);

// e.g. prim, <"he is a", "good", "man">, {"a", "b"}
std::string render_composition(const Registry& reg, const Composition& c);

// e.g. within("s"), <"he is a", _, "man">, among{"a", "b"}
std::string render_concept(const Registry& reg, const Concept& c);

std::string render_slot(Slot slot);

}  // namespace coab
