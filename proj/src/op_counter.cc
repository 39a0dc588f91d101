#include "rfabe/op_counter.h"

#include <sstream>

namespace rfabe {
namespace {
thread_local OpCounter* current = nullptr;
}  // namespace

OpCounter& OpCounter::operator+=(const OpCounter& other) {
  pairings += other.pairings;
  exp_g1 += other.exp_g1;
  exp_g2 += other.exp_g2;
  exp_gt += other.exp_gt;
  mul_g1 += other.mul_g1;
  mul_g2 += other.mul_g2;
  mul_gt += other.mul_gt;
  hashes += other.hashes;
  samples += other.samples;
  return *this;
}

std::string OpCounter::to_string() const {
  std::ostringstream os;
  os << "pair=" << pairings << " exp(g1,g2,gt)=(" << exp_g1 << ","
     << exp_g2 << "," << exp_gt << ") mul(g1,g2,gt)=(" << mul_g1 << ","
     << mul_g2 << "," << mul_gt << ") hash=" << hashes
     << " samples=" << samples;
  return os.str();
}

CountScope::CountScope(OpCounter& counter) : previous_(current) {
  current = &counter;
}

CountScope::~CountScope() { current = previous_; }

OpCounter* active_counter() { return current; }

}  // namespace rfabe
