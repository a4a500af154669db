#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

// All recoverable failures in the library surface as this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw Error(what);
}
inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

}  // namespace ergolab
