#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>

#include "zkpot/common/bytes.hpp"

namespace zkpot::ledger {

struct NotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CorruptBlob : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Content address: the SHA-256 of the stored bytes.
struct CasAddress {
    Digest32 digest{};

    auto operator<=>(const CasAddress&) const = default;
    std::string to_hex() const;
    static std::optional<CasAddress> from_hex(std::string_view hex);
    static CasAddress of(std::span<const std::uint8_t> bytes);
};

class Cas {
public:
    virtual ~Cas() = default;
    virtual CasAddress put(std::span<const std::uint8_t> bytes) = 0;
    virtual Bytes get(const CasAddress& addr) = 0;  // NotFound / CorruptBlob
};

// Hermetic default: cas/<first-2-hex>/<full-64-hex> files of raw bytes,
// re-hashed on read.
class DiskCas final : public Cas {
public:
    explicit DiskCas(std::filesystem::path root);
    CasAddress put(std::span<const std::uint8_t> bytes) override;
    Bytes get(const CasAddress& addr) override;
    std::filesystem::path path_of(const CasAddress& addr) const;

private:
    std::filesystem::path root_;
    std::mutex write_mu_;
};

class MemoryCas final : public Cas {
public:
    CasAddress put(std::span<const std::uint8_t> bytes) override;
    Bytes get(const CasAddress& addr) override;

private:
    std::map<CasAddress, Bytes> blobs_;
    std::mutex mu_;
};

// Adapter speaking the IPFS HTTP gateway endpoints (POST /api/v0/add,
// POST /api/v0/cat?arg=<cid>) with a digest cross-check on retrieval.
class IpfsHttpCas final : public Cas {
public:
    IpfsHttpCas(std::string host, int port);
    ~IpfsHttpCas() override;
    CasAddress put(std::span<const std::uint8_t> bytes) override;
    Bytes get(const CasAddress& addr) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace zkpot::ledger
