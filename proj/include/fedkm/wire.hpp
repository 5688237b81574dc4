#ifndef FEDKM_WIRE_HPP
#define FEDKM_WIRE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fedkm/federation.hpp"

namespace fedkm {

// Protocol messages as self-describing CBOR documents, so the simulated
// transport can be replaced by a real one. Every message carries a format
// tag ("fkm/1"), its message type, the matrix shape, row-major means and
// per-cluster counts. 64-bit floats survive a round trip bit-exactly.
std::vector<std::uint8_t> to_wire(const ClientUpdate& update);
std::vector<std::uint8_t> to_wire(const GlobalModel& model);

// Throw protocol_error on an unknown format tag, wrong message type, or a
// shape that does not match the payload.
ClientUpdate client_update_from_wire(std::span<const std::uint8_t> bytes);
GlobalModel global_model_from_wire(std::span<const std::uint8_t> bytes);

} // namespace fedkm

#endif
