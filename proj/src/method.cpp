#include "mti/method.hpp"

namespace mti {

std::string to_string(Method m) {
  switch (m) {
    case Method::MtiFa: return "mti-fa";
    case Method::MtiF: return "mti-f";
    case Method::EwiG: return "ewi-g";
    case Method::EwiD: return "ewi-d";
    case Method::EwiF1: return "ewi-f1";
    case Method::EwiF2: return "ewi-f2";
    case Method::Cnfd: return "cnfd";
    case Method::Sifd: return "sifd";
    default: return "exfd";
  }
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

bool is_mti(Method m) { return m == Method::MtiFa || m == Method::MtiF; }

}  // namespace mti
