#pragma once

#include <string>

#include "svne/enhance.hpp"
#include "svne/multipath.hpp"

namespace svne {

// JSON documents for the enhanced-network and embedding artifacts. The
// enhanced document round-trips; embeddings are write-only records.
std::string enhanced_to_json(const EnhancedVn& enhanced, double fip_objective);
EnhancedVn enhanced_from_json(const std::string& text);

std::string embedding_to_json(const Embedding& embedding);

}  // namespace svne
