#include "coab/render.hpp"

namespace coab {

std::string render_op_ref(const Registry& reg, OperationId id) {
  const Operation& op = reg.get(id);
  if (op.display_name) return "\"" + *op.display_name + "\"";
  return "#" + std::to_string(id.value);
}

std::string render_composition(const Registry& reg, const Composition& c) {
  if (c.kind == CompKind::Primitive) return "prim";
  std::string out = c.kind == CompKind::Sequence ? "<" : "{";
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    if (i) out += ", ";
    out += render_op_ref(reg, c.elements[i]);
  }
  out += c.kind == CompKind::Sequence ? ">" : "}";
  return out;
}

std::string render_concept(const Registry& reg, const Concept& c) {
  switch (c.kind) {
    case ConceptKind::WithinOp:
      return "within(" + render_op_ref(reg, c.within) + ")";
    case ConceptKind::SeqContext: {
      std::string out = "<";
      for (std::size_t i = 0; i < c.slots.size(); ++i) {
        if (i) out += ", ";
        out += i == c.hole ? "_" : render_op_ref(reg, c.slots[i]);
      }
      return out + ">";
    }
    case ConceptKind::SetContext: {
      std::string out = "among{";
      for (std::size_t i = 0; i < c.co_members.size(); ++i) {
        if (i) out += ", ";
        out += render_op_ref(reg, c.co_members[i]);
      }
      return out + "}";
    }
  }
  return "?";
}

std::string render_slot(Slot slot) {
  return (slot.kind == SlotKind::SeqPos ? "pos " : "member ") + std::to_string(slot.index);
}

}  // namespace coab
