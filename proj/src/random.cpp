#include "epa/random.hpp"

#include <vector>

namespace epa {

Engine make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (key.size() + 1));
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (std::uint64_t k : key) push(k);
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

}  // namespace epa
