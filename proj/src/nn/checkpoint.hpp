#pragma once

#include <string>

#include "nn/param_store.hpp"

namespace roomsrl::nn {

// Versioned binary record of named tensors with shapes. Round-trips are
// lossless in double precision; byte order is the host's.
void save_params(const ParamStore& store, const std::string& path);

// Loads by name into an already-constructed store; the file must contain
// exactly the store's parameters with matching shapes.
void load_params(ParamStore& store, const std::string& path);

}  // namespace roomsrl::nn
