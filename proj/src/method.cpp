#include "kpca/method.hpp"

#include "kpca/errors.hpp"

namespace kpca {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::exact:
      return "exact";
    case Method::nystrom:
      return "nystrom";
    case Method::rnca:
      return "rnca";
    case Method::skpca:
      return "skpca";
  }
  throw ParamError("method_name: unknown method value");
}

Method parse_method(std::string_view name) {
  if (name == "exact") return Method::exact;
  if (name == "nystrom") return Method::nystrom;
  if (name == "rnca") return Method::rnca;
  if (name == "skpca") return Method::skpca;
  throw ParamError("unknown method '" + std::string(name) +
                   "' (expected exact, nystrom, rnca, or skpca)");
}

}  // namespace kpca
