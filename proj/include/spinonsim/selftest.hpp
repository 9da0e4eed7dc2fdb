#pragma once

#include <cstdint>
#include <ostream>

namespace spinonsim {

// Seeded property suites: unitarity, Sz conservation, norm bounds, projector
// idempotence, Hermiticity of overlap/transition matrices, post-selection
// completeness. Returns the number of failed instances (0 on success).
int run_selftest(std::uint64_t base_seed, int n_instances, std::ostream& log);

} // namespace spinonsim
