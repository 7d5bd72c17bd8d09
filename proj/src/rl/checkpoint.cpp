#include "uvwipe/rl/checkpoint.hpp"
#include "uvwipe/error.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

namespace uvwipe::rl {

namespace {

constexpr std::array<char, 8> kMagic{'U', 'V', 'W', 'S', 'A', 'C', 'K', '1'};

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw Error(ErrorKind::parse, "checkpoint is truncated");
    }
    return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, SacAgent<float>& agent, const CheckpointHeader& header) {
    const ParamList<float> params = agent.all_parameters();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint64_t>(out, header.config_hash);
    put<std::uint64_t>(out, header.step);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const Parameter<float>* p : params) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.rows()));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.cols()));
        out.write(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<std::streamsize>(p->value.size() * sizeof(float)));
    }
    if (!out) {
        throw Error(ErrorKind::io, "failed to write checkpoint");
    }
}

CheckpointHeader read_checkpoint_header(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw Error(ErrorKind::parse, "not a uvwipe checkpoint");
    }
    CheckpointHeader h;
    h.version = get<std::uint32_t>(in);
    if (h.version != kCheckpointVersion) {
        throw Error(ErrorKind::parse, "unsupported checkpoint version " + std::to_string(h.version));
    }
    h.config_hash = get<std::uint64_t>(in);
    h.step = get<std::uint64_t>(in);
    return h;
}

CheckpointHeader read_checkpoint(std::istream& in, SacAgent<float>& agent,
                                 std::optional<std::uint64_t> expected_hash) {
    const CheckpointHeader h = read_checkpoint_header(in);
    if (expected_hash && *expected_hash != h.config_hash) {
        throw Error(ErrorKind::lineage_mismatch, "checkpoint was produced by a different configuration");
    }
    std::map<std::string, Parameter<float>*> by_name;
    for (Parameter<float>* p : agent.all_parameters()) by_name[p->name] = p;
    const auto count = get<std::uint32_t>(in);
    if (count != by_name.size()) {
        throw Error(ErrorKind::shape_mismatch, "checkpoint holds " + std::to_string(count) +
                                                   " tensors, agent has " + std::to_string(by_name.size()));
    }
    for (std::uint32_t k = 0; k < count; ++k) {
        const auto len = get<std::uint32_t>(in);
        std::string name(len, '\0');
        if (!in.read(name.data(), len)) {
            throw Error(ErrorKind::parse, "checkpoint is truncated");
        }
        const auto rows = get<std::uint32_t>(in);
        const auto cols = get<std::uint32_t>(in);
        const auto it = by_name.find(name);
        if (it == by_name.end()) {
            throw Error(ErrorKind::shape_mismatch, "unknown tensor '" + name + "' in checkpoint");
        }
        Parameter<float>& p = *it->second;
        if (p.value.rows() != rows || p.value.cols() != cols) {
            throw Error(ErrorKind::shape_mismatch, "tensor '" + name + "' has shape " + std::to_string(rows) +
                                                       "x" + std::to_string(cols) + ", expected " +
                                                       std::to_string(p.value.rows()) + "x" +
                                                       std::to_string(p.value.cols()));
        }
        if (!in.read(reinterpret_cast<char*>(p.value.data()),
                     static_cast<std::streamsize>(p.value.size() * sizeof(float)))) {
            throw Error(ErrorKind::parse, "checkpoint is truncated");
        }
    }
    return h;
}

void save_checkpoint(const std::filesystem::path& path, SacAgent<float>& agent,
                     const CheckpointHeader& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    }
    write_checkpoint(out, agent, header);
}

CheckpointHeader load_checkpoint(const std::filesystem::path& path, SacAgent<float>& agent,
                                 std::optional<std::uint64_t> expected_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::missing_artifact, "checkpoint " + path.string() + " not found");
    }
    return read_checkpoint(in, agent, expected_hash);
}

}  // namespace uvwipe::rl
