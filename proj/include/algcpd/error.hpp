#pragma once

#include <stdexcept>
#include <string>

namespace algcpd {

/// Raised for contract violations and invalid inputs throughout the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace algcpd
