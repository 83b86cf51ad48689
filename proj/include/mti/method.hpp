#pragma once

#include <optional>
#include <string>

namespace mti {

/// The nine integrators exposed by the benchmark.
enum class Method {
  MtiFa,
  MtiF,
  EwiG,
  EwiD,
  EwiF1,
  EwiF2,
  Cnfd,
  Sifd,
  Exfd,
};

inline constexpr Method kAllMethods[] = {Method::MtiFa, Method::MtiF,  Method::EwiG,
                                         Method::EwiD,  Method::EwiF1, Method::EwiF2,
                                         Method::Cnfd,  Method::Sifd,  Method::Exfd};

std::string to_string(Method m);
std::optional<Method> parse_method(const std::string& name);
bool is_mti(Method m);

}  // namespace mti
