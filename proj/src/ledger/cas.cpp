#include "zkpot/ledger/cas.hpp"

#include <fstream>

#include "httplib.h"
#include "json.hpp"
#include "zkpot/common/sha256.hpp"

namespace zkpot::ledger {

std::string CasAddress::to_hex() const { return zkpot::to_hex(digest); }

std::optional<CasAddress> CasAddress::from_hex(std::string_view hex) {
    if (hex.size() != 64) return std::nullopt;
    CasAddress addr;
    try {
        Bytes raw = zkpot::from_hex(hex);
        std::copy(raw.begin(), raw.end(), addr.digest.begin());
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    return addr;
}

CasAddress CasAddress::of(std::span<const std::uint8_t> bytes) {
    return CasAddress{sha256(bytes)};
}

DiskCas::DiskCas(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::filesystem::path DiskCas::path_of(const CasAddress& addr) const {
    std::string hex = addr.to_hex();
    return root_ / hex.substr(0, 2) / hex;
}

CasAddress DiskCas::put(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw CorruptBlob("cas: refusing to store empty blob");
    CasAddress addr = CasAddress::of(bytes);
    std::scoped_lock lock(write_mu_);
    std::filesystem::path p = path_of(addr);
    if (std::filesystem::exists(p)) return addr;  // idempotent
    std::filesystem::create_directories(p.parent_path());
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw CorruptBlob("cas: write failed");
    }
    std::filesystem::rename(tmp, p);
    return addr;
}

Bytes DiskCas::get(const CasAddress& addr) {
    std::filesystem::path p = path_of(addr);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw NotFound("cas: unknown address " + addr.to_hex());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (CasAddress::of(bytes) != addr)
        throw CorruptBlob("cas: stored bytes do not match digest " + addr.to_hex());
    return bytes;
}

CasAddress MemoryCas::put(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw CorruptBlob("cas: refusing to store empty blob");
    CasAddress addr = CasAddress::of(bytes);
    std::scoped_lock lock(mu_);
    blobs_.emplace(addr, Bytes(bytes.begin(), bytes.end()));
    return addr;
}

Bytes MemoryCas::get(const CasAddress& addr) {
    std::scoped_lock lock(mu_);
    auto it = blobs_.find(addr);
    if (it == blobs_.end()) throw NotFound("cas: unknown address " + addr.to_hex());
    if (CasAddress::of(it->second) != addr) throw CorruptBlob("cas: blob corrupted in memory");
    return it->second;
}

struct IpfsHttpCas::Impl {
    httplib::Client client;
    std::map<CasAddress, std::string> cids;
    std::mutex mu;
    Impl(const std::string& host, int port) : client(host, port) {}
};

IpfsHttpCas::IpfsHttpCas(std::string host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}
IpfsHttpCas::~IpfsHttpCas() = default;

CasAddress IpfsHttpCas::put(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw CorruptBlob("cas: refusing to store empty blob");
    httplib::MultipartFormDataItems items = {
        {"file", std::string(bytes.begin(), bytes.end()), "blob", "application/octet-stream"}};
    auto res = impl_->client.Post("/api/v0/add", items);
    if (!res || res->status != 200) throw NotFound("ipfs: add failed");
    auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("Hash")) throw CorruptBlob("ipfs: bad add response");
    CasAddress addr = CasAddress::of(bytes);
    std::scoped_lock lock(impl_->mu);
    impl_->cids[addr] = body["Hash"].get<std::string>();
    return addr;
}

Bytes IpfsHttpCas::get(const CasAddress& addr) {
    std::string cid;
    {
        std::scoped_lock lock(impl_->mu);
        auto it = impl_->cids.find(addr);
        if (it == impl_->cids.end()) throw NotFound("ipfs: unknown address " + addr.to_hex());
        cid = it->second;
    }
    auto res = impl_->client.Post(("/api/v0/cat?arg=" + cid).c_str(), "", "text/plain");
    if (!res || res->status != 200) throw NotFound("ipfs: cat failed for " + cid);
    Bytes bytes(res->body.begin(), res->body.end());
    if (CasAddress::of(bytes) != addr)
        throw CorruptBlob("ipfs: gateway returned bytes with wrong digest");
    return bytes;
}

}  // namespace zkpot::ledger
