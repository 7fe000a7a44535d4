#include "nn/checkpoint.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <vector>

#include "errors.hpp"

namespace roomsrl::nn {

namespace {

constexpr char kMagic[8] = {'R', 'R', 'L', 'P', 'R', 'M', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_params(const ParamStore& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    write_u64(out, store.entries().size());
    for (const auto& entry : store.entries()) {
        write_u64(out, entry.name.size());
        out.write(entry.name.data(), static_cast<std::streamsize>(entry.name.size()));
        const Tensor& value = *entry.value;
        write_u64(out, value.rank());
        for (std::size_t d = 0; d < value.rank(); ++d) write_u64(out, value.extent(d));
        out.write(reinterpret_cast<const char*>(value.data()),
                  static_cast<std::streamsize>(value.size() * sizeof(double)));
    }
    if (!out) throw IoError("short write to '" + path + "'");
}

void load_params(ParamStore& store, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[sizeof(kMagic)] = {};
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
        throw IoError("'" + path + "' is not a parameter checkpoint");
    }
    const std::uint64_t count = read_u64(in);
    if (count != store.entries().size()) {
        throw IoError("checkpoint holds " + std::to_string(count) + " tensors, expected " +
                      std::to_string(store.entries().size()));
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t name_len = read_u64(in);
        std::string name(name_len, '\0');
        in.read(name.data(), static_cast<std::streamsize>(name_len));
        const std::uint64_t rank = read_u64(in);
        std::vector<std::size_t> shape(rank);
        for (auto& extent : shape) extent = read_u64(in);
        if (!in) throw IoError("truncated checkpoint '" + path + "'");
        const ParamStore::Entry* entry = store.find(name);
        if (entry == nullptr) throw IoError("checkpoint tensor '" + name + "' has no match");
        if (entry->value->shape() != shape) {
            throw IoError("checkpoint tensor '" + name + "' has mismatched shape");
        }
        in.read(reinterpret_cast<char*>(entry->value->data()),
                static_cast<std::streamsize>(entry->value->size() * sizeof(double)));
        if (!in) throw IoError("truncated checkpoint '" + path + "'");
    }
}

}  // namespace roomsrl::nn
