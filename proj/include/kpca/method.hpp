#pragma once

#include <string>
#include <string_view>

namespace kpca {

// Feature-extraction methods the benchmark compares.
enum class Method { exact, nystrom, rnca, skpca };

std::string_view method_name(Method method);

// Throws ParamError on unknown names.
Method parse_method(std::string_view name);

}  // namespace kpca
