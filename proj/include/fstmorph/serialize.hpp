// Canonical binary serialization of a transducer.
//
// Layout (all integers little-endian uint32):
//   magic "FSTM", version,
//   symbol count, then per symbol: byte length + UTF-8 bytes (id order,
//   entry 0 is the empty epsilon text),
//   state count, start id, final count, final ids (ascending),
//   then per state: arc count, arcs as (upper, lower, target) triples.
// Equal transducers serialize byte-identically; loading validates every id.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "transducer.hpp"

namespace fstmorph {

inline constexpr std::uint32_t kSerializationVersion = 1;
inline constexpr std::string_view kSerializationMagic = "FSTM";

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

struct ByteReader {
    std::string_view data;
    std::size_t pos = 0;

    std::uint32_t u32() {
        if (pos + 4 > data.size()) throw SerializationError("truncated transducer data");
        const auto b = [&](std::size_t i) {
            return static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i]));
        };
        const std::uint32_t v = b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
        pos += 4;
        return v;
    }

    std::string_view bytes(std::size_t n) {
        if (pos + n > data.size()) throw SerializationError("truncated transducer data");
        const auto out = data.substr(pos, n);
        pos += n;
        return out;
    }
};

}  // namespace detail

inline std::string serialize(const Transducer& t) {
    std::string out;
    out += kSerializationMagic;
    detail::put_u32(out, kSerializationVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(t.symbols().size()));
    for (SymbolId id = 0; id < t.symbols().size(); ++id) {
        const std::string& text = t.symbols().text_of(id);
        detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
        out += text;
    }
    detail::put_u32(out, static_cast<std::uint32_t>(t.num_states()));
    detail::put_u32(out, t.start());
    const auto finals = t.final_states();
    detail::put_u32(out, static_cast<std::uint32_t>(finals.size()));
    for (StateId f : finals) detail::put_u32(out, f);
    for (StateId s = 0; s < t.num_states(); ++s) {
        detail::put_u32(out, static_cast<std::uint32_t>(t.arcs(s).size()));
        for (const Arc& arc : t.arcs(s)) {
            detail::put_u32(out, arc.upper);
            detail::put_u32(out, arc.lower);
            detail::put_u32(out, arc.target);
        }
    }
    return out;
}

inline Transducer deserialize(std::string_view data) {
    detail::ByteReader in{data};
    if (in.bytes(4) != kSerializationMagic)
        throw SerializationError("not a transducer file (bad magic)");
    const std::uint32_t version = in.u32();
    if (version != kSerializationVersion)
        throw SerializationError("unsupported transducer version " + std::to_string(version));
    const std::uint32_t nsym = in.u32();
    if (nsym == 0) throw SerializationError("symbol table missing epsilon entry");
    SymbolTable symbols;
    for (std::uint32_t id = 0; id < nsym; ++id) {
        const std::uint32_t len = in.u32();
        const auto text = in.bytes(len);
        if (id == 0) {
            if (!text.empty()) throw SerializationError("symbol 0 must be epsilon");
            continue;
        }
        if (symbols.intern(text) != id)
            throw SerializationError("duplicate symbol text in table");
    }
    const std::uint32_t nstates = in.u32();
    if (nstates == 0) throw SerializationError("transducer must have a state");
    Transducer t(std::move(symbols));
    for (std::uint32_t s = 1; s < nstates; ++s) t.add_state();
    const std::uint32_t start = in.u32();
    if (start >= nstates) throw SerializationError("start state out of range");
    t.set_start(start);
    const std::uint32_t nfinals = in.u32();
    for (std::uint32_t i = 0; i < nfinals; ++i) {
        const std::uint32_t f = in.u32();
        if (f >= nstates) throw SerializationError("final state out of range");
        t.set_final(f);
    }
    for (std::uint32_t s = 0; s < nstates; ++s) {
        const std::uint32_t narcs = in.u32();
        for (std::uint32_t i = 0; i < narcs; ++i) {
            const std::uint32_t upper = in.u32();
            const std::uint32_t lower = in.u32();
            const std::uint32_t target = in.u32();
            if (upper >= nsym || lower >= nsym)
                throw SerializationError("arc symbol out of range");
            if (target >= nstates) throw SerializationError("arc target out of range");
            t.add_arc(s, upper, lower, target);
        }
    }
    if (in.pos != data.size()) throw SerializationError("trailing bytes after transducer");
    return t;
}

inline void save_file(const Transducer& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SerializationError("cannot open " + path + " for writing");
    const std::string data = serialize(t);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw SerializationError("failed writing " + path);
}

inline Transducer load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SerializationError("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(data);
}

}  // namespace fstmorph
