#include "hetnet/random.hpp"

namespace hetnet {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * 0xd1b54a32d192ed03ULL));
}

}  // namespace hetnet
