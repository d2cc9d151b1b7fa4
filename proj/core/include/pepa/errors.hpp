#pragma once

#include <stdexcept>
#include <string>

namespace pepa {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Semantic problems with a model or a query against it: undefined constants,
// mixed active/passive rates for one action type, incomplete models where
// completeness is required, reducible chains where irreducibility is required.
struct ModelError : Error {
  using Error::Error;
};

// Deliberate resource guards tripped: state-space cap, enumeration size guard.
struct ResourceError : Error {
  using Error::Error;
};

}  // namespace pepa
