#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "pepa/errors.hpp"
#include "pepa/rational.hpp"

namespace pepa {

// An activity rate: either an active exponential parameter r > 0, or the
// passive symbol carried with a positive weight w (written T, or n*T).
// Ordering: every active rate is smaller than every passive one; actives
// compare by value, passives by weight. This is what min() over apparent
// rates in cooperation relies on.
class Rate {
 public:
  static Rate active(Rational value);
  static Rate passive(Rational weight);

  bool is_active() const { return active_; }
  bool is_passive() const { return !active_; }

  // The exponential parameter for active rates, the weight for passive ones.
  const Rational& value() const { return value_; }

  // Defined for same-kind operands only; mixing kinds for one action type is
  // a model validation error and callers check before summing.
  Rate operator+(const Rate& other) const;
  Rate scaled(std::int64_t multiplicity) const;

  bool operator==(const Rate& other) const;
  bool operator!=(const Rate& other) const { return !(*this == other); }
  bool operator<(const Rate& other) const;

  // "3", "1/2", "T", "2*T".
  std::string str() const;

  std::size_t hash() const;

 private:
  Rate(bool active, Rational value);

  bool active_;
  Rational value_;
};

Rate min(const Rate& a, const Rate& b);

}  // namespace pepa
