#ifndef RFABE_OP_COUNTER_H_
#define RFABE_OP_COUNTER_H_

#include <cstdint>
#include <string>

namespace rfabe {

// Tallies of group operations performed inside a CountScope.
//
// Conventions: "mul" is one group operation (point addition in G1/G2, one
// Fp12 product in GT; a division counts as one mul). "exp" is one scalar
// multiplication / exponentiation by a non-trivial exponent. "hashes"
// covers both hash-to-G1 and hash-to-scalar calls. "samples" counts the
// exponentiations spent drawing fresh uniformly random group elements,
// which cost tables conventionally leave out.
struct OpCounter {
  std::uint64_t pairings = 0;
  std::uint64_t exp_g1 = 0;
  std::uint64_t exp_g2 = 0;
  std::uint64_t exp_gt = 0;
  std::uint64_t mul_g1 = 0;
  std::uint64_t mul_g2 = 0;
  std::uint64_t mul_gt = 0;
  std::uint64_t hashes = 0;
  std::uint64_t samples = 0;

  OpCounter& operator+=(const OpCounter& other);
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
  std::string to_string() const;
};

// Installs `counter` as the active tally for the current thread until the
// scope ends. Scopes nest; the previous tally is restored on exit and is not
// charged for work done inside the inner scope.
class CountScope {
 public:
  explicit CountScope(OpCounter& counter);
  ~CountScope();
  CountScope(const CountScope&) = delete;
  CountScope& operator=(const CountScope&) = delete;

 private:
  OpCounter* previous_;
};

// Active tally for this thread, or nullptr when nothing is being counted.
OpCounter* active_counter();

}  // namespace rfabe

#endif  // RFABE_OP_COUNTER_H_
