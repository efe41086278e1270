#include <string>

#include "fqnm/errors.hpp"
#include "fqnm/transfer.hpp"

namespace fqnm {

GridField::GridField(std::vector<std::size_t> extents, std::vector<State> states,
                     Resolution resolution)
    : extents_(std::move(extents)), states_(std::move(states)), resolution_(resolution) {
  if (extents_.empty()) throw ConfigError("GridField: dimension must be at least 1");
  std::size_t count = 1;
  for (const std::size_t e : extents_) {
    if (e < 2) throw ConfigError("GridField: every extent must be at least 2");
    count *= e;
  }
  if (count != states_.size()) {
    throw ConfigError("GridField: state count " + std::to_string(states_.size()) +
                      " does not match extents product " + std::to_string(count));
  }
}

std::size_t GridField::index(std::span<const std::size_t> multi) const {
  std::size_t idx = 0;
  for (std::size_t m = 0; m < extents_.size(); ++m) {
    idx = idx * extents_[m] + multi[m];
  }
  return idx;
}

GridField step_nd(const GridField& grid, std::span<const TransferMaps> per_direction) {
  const std::size_t d = grid.dimension();
  if (per_direction.size() != d) {
    throw ConfigError("step_nd: need one pair of transfer maps per direction");
  }
  const auto q = grid.states();
  std::vector<State> out(q.begin(), q.end());
  const auto extents = grid.extents();

  std::size_t stride = 1;
  for (std::size_t m = d; m-- > 0;) {
    const std::size_t len = extents[m];
    const std::size_t block = stride * len;
    const TransferMaps& maps = per_direction[m];
    // Each cell owns the face towards its +e_m neighbour; the face flux leaves
    // one cell and enters the other, so every internal face cancels.
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::size_t coord = (i / stride) % len;
      const std::size_t j = coord + 1 == len ? i - (len - 1) * stride : i + stride;
      const State f = interface_flux(maps, q[i], q[j]);
      State a, b;
      if (__builtin_sub_overflow(out[i], f, &a) || __builtin_add_overflow(out[j], f, &b)) {
        throw NumericalError("integer overflow in step_nd at cell " + std::to_string(i));
      }
      out[i] = a;
      out[j] = b;
    }
    stride = block;
  }
  return GridField(std::vector<std::size_t>(extents.begin(), extents.end()), std::move(out),
                   grid.resolution());
}

}  // namespace fqnm
