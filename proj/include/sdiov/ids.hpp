#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace sdiov {

// Index-backed identifier. Distinct tags keep PM, VNF, link and node ids from
// being mixed up at call sites.
template <typename Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

struct PmTag;
struct VnfTag;
struct LinkTag;
struct NodeTag;
struct FlowTag;

using PmId = Id<PmTag>;
using VnfId = Id<VnfTag>;
using LinkId = Id<LinkTag>;
using NodeId = Id<NodeTag>;
using RequestId = Id<FlowTag>;

}  // namespace sdiov

template <typename Tag>
struct std::hash<sdiov::Id<Tag>> {
  std::size_t operator()(sdiov::Id<Tag> id) const noexcept { return id.value; }
};
