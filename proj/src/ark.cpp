#include "pivotheso/ark.hpp"

namespace pivotheso {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string ArkMinter::candidate(std::uint64_t n) const {
    std::uint64_t bits = splitmix64(splitmix64(seed_) ^ n);
    std::string body(body_length, '0');
    for (std::size_t i = 0; i < body_length; ++i) {
        body[i] = alphabet[bits & 31U];
        bits >>= 5;
    }
    return "ark:/" + naan_ + "/" + prefix_ + body;
}

std::string ArkMinter::mint(const std::function<bool(const std::string&)>& in_use,
                           std::uint64_t& cursor) const {
    for (;; ++cursor) {
        std::string id = candidate(cursor);
        if (!in_use(id)) {
            ++cursor;
            return id;
        }
    }
}

}  // namespace pivotheso
