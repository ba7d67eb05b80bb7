#include "zkpot/zk/backend.hpp"

namespace zkpot::zk {

std::unique_ptr<Backend> make_oracle_backend();
std::unique_ptr<Backend> make_snark_backend();

std::unique_ptr<Backend> make_backend(std::string_view name) {
    if (name == "oracle") return make_oracle_backend();
    if (name == "snark") return make_snark_backend();
    throw std::invalid_argument("unknown backend: " + std::string(name));
}

static const char kMagic[] = "ZKPOTPRF";

Bytes wrap_container(std::uint8_t backend, std::uint8_t kind, Bytes payload) {
    ByteWriter w;
    w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
    w.u16(1);
    w.u8(backend);
    w.u8(kind);
    w.raw(payload);
    return w.take();
}

std::optional<ContainerView> parse_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12) return std::nullopt;
    for (int i = 0; i < 8; ++i)
        if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) return std::nullopt;
    ContainerView v;
    v.version = static_cast<std::uint16_t>(bytes[8] | (bytes[9] << 8));
    if (v.version != 1) return std::nullopt;
    v.backend = bytes[10];
    v.kind = bytes[11];
    v.payload = bytes.subspan(12);
    return v;
}

void write_shape_config(ByteWriter& w, const ModelShape& shape, const CircuitConfig& cfg) {
    w.u32(static_cast<std::uint32_t>(shape.dims.size()));
    for (auto d : shape.dims) w.u32(static_cast<std::uint32_t>(d));
    w.u32(cfg.n_samples);
    w.u32(cfg.shift);
    w.u32(cfg.activation_bits);
    w.u32(cfg.compare_bits);
}

std::pair<ModelShape, CircuitConfig> read_shape_config(ByteReader& r) {
    ModelShape shape;
    std::uint32_t nd = r.u32();
    if (nd > 64) throw DeserializeError("implausible shape");
    shape.dims.resize(nd);
    for (auto& d : shape.dims) d = r.u32();
    CircuitConfig cfg;
    cfg.n_samples = r.u32();
    cfg.shift = r.u32();
    cfg.activation_bits = r.u32();
    cfg.compare_bits = r.u32();
    return {std::move(shape), cfg};
}

}  // namespace zkpot::zk
