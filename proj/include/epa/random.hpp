#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace epa {

using Engine = std::mt19937_64;

/// Independent engine for a (seed, key..., replication) tuple. Every simulation
/// draw goes through a stream derived here, never through a shared engine, so
/// output does not depend on how replications are spread over workers.
[[nodiscard]] Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

}  // namespace epa
