#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace pivotheso {

// Mints "ark:/<naan>/<prefix><10 base-32 chars>" identifiers. The n-th
// candidate is a pure function of (seed, n); collisions with ids already in
// use are skipped, so a store replaying the same edits gets the same ids.
class ArkMinter {
public:
    ArkMinter() = default;
    ArkMinter(std::string naan, std::string prefix, std::uint64_t seed)
        : naan_(std::move(naan)), prefix_(std::move(prefix)), seed_(seed) {}

    std::string candidate(std::uint64_t n) const;

    // First candidate at or after `cursor` for which in_use returns false;
    // advances the cursor past it. Candidates before the cursor must already
    // be in use, which holds when the cursor only ever moves through mint().
    std::string mint(const std::function<bool(const std::string&)>& in_use, std::uint64_t& cursor) const;

    const std::string& naan() const { return naan_; }
    const std::string& prefix() const { return prefix_; }
    std::uint64_t seed() const { return seed_; }

    static constexpr std::string_view alphabet = "0123456789abcdefghjkmnpqrstvwxyz";
    static constexpr std::size_t body_length = 10;

private:
    std::string naan_ = "99999";
    std::string prefix_ = "pvt";
    std::uint64_t seed_ = 0;
};

}  // namespace pivotheso
