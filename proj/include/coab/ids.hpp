#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace coab {

inline constexpr std::uint32_t kInvalidId = 0xffffffffu;

// Identifier of a registered operation. Dense, assigned in registration order,
// never reused.
struct OperationId {
  std::uint32_t value = kInvalidId;

  constexpr bool valid() const noexcept { return value != kInvalidId; }
  friend constexpr auto operator<=>(OperationId, OperationId) noexcept = default;
};

// Identifier of an interned concept. Dense, assigned in interning order.
struct ConceptId {
  std::uint32_t value = kInvalidId;

  constexpr bool valid() const noexcept { return value != kInvalidId; }
  friend constexpr auto operator<=>(ConceptId, ConceptId) noexcept = default;
};

}  // namespace coab

template <>
struct std::hash<coab::OperationId> {
  std::size_t operator()(coab::OperationId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<coab::ConceptId> {
  std::size_t operator()(coab::ConceptId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
