#include "pepa/rate.hpp"

#include "pepa/errors.hpp"

namespace pepa {

Rate::Rate(bool active, Rational value) : active_(active), value_(std::move(value)) {
  value_.canonicalize();  // mpq comparison and hashing assume canonical form
  if (value_ <= 0) throw ModelError("rate values and passive weights must be positive");
}

Rate Rate::active(Rational value) { return Rate(true, std::move(value)); }

Rate Rate::passive(Rational weight) { return Rate(false, std::move(weight)); }

Rate Rate::operator+(const Rate& other) const {
  if (active_ != other.active_)
    throw ModelError("cannot add an active rate and a passive weight");
  return Rate(active_, value_ + other.value_);
}

Rate Rate::scaled(std::int64_t multiplicity) const {
  if (multiplicity <= 0) throw ModelError("multiplicity must be positive");
  return Rate(active_, value_ * Rational(static_cast<long>(multiplicity)));
}

bool Rate::operator==(const Rate& other) const {
  return active_ == other.active_ && value_ == other.value_;
}

bool Rate::operator<(const Rate& other) const {
  if (active_ != other.active_) return active_;  // active < passive
  return value_ < other.value_;
}

std::string Rate::str() const {
  if (active_) return format_rational(value_);
  if (value_ == 1) return "T";
  return format_rational(value_) + "*T";
}

std::size_t Rate::hash() const {
  std::size_t h = hash_rational(value_);
  return active_ ? h : ~h;
}

Rate min(const Rate& a, const Rate& b) { return b < a ? b : a; }

}  // namespace pepa
