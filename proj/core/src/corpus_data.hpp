#pragma once

#include <string_view>
#include <vector>

namespace crnperm::detail {

struct BundledDocument {
  std::string_view name;
  std::string_view text;
};

// Defined in the generated corpus_data.cpp.
const std::vector<BundledDocument>& bundled_documents();

}  // namespace crnperm::detail
