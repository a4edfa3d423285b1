#ifndef MARKOV_ENUMERATION_HPP
#define MARKOV_ENUMERATION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <zlib.h>

#include "markov_core.hpp"

namespace markov {

/// A pending tree node; ordered by (max, y, x).
struct FrontierNode {
    MarkovTriple triple;

    Integer const& max() const noexcept { return triple.z(); }
};

/// One value produced by a MarkovStream.
struct Emission {
    std::uint64_t index;    ///< distinct-value index n (1-based)
    std::uint64_t sequence; ///< total emissions so far, duplicates included
    MarkovTriple triple;
    bool duplicate;         ///< max equals the previously emitted max

    Integer const& value() const noexcept { return triple.z(); }
};

using CheckpointBlob = std::vector<std::uint8_t>;

struct checkpoint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct checkpoint_version_error : checkpoint_error {
    using checkpoint_error::checkpoint_error;
};
struct checkpoint_corrupt_error : checkpoint_error {
    using checkpoint_error::checkpoint_error;
};

namespace detail {

inline constexpr std::uint8_t checkpoint_magic[4] = {'M', 'K', 'V', 'S'};
inline constexpr std::uint32_t checkpoint_version = 1;

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void bytes(std::span<std::uint8_t const> b) { out_.insert(out_.end(), b.begin(), b.end()); }

    /// Sign byte, u32 byte count, little-endian magnitude.
    void integer(Integer const& v)
    {
        u8(sgn(v) < 0 ? 1 : 0);
        std::size_t count = 0;
        std::vector<std::uint8_t> mag((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
        mpz_export(mag.data(), &count, -1, 1, -1, 0, v.get_mpz_t());
        mag.resize(count);
        u32(static_cast<std::uint32_t>(count));
        bytes(mag);
    }

    CheckpointBlob& data() { return out_; }

private:
    CheckpointBlob out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<std::uint8_t const> in) : in_(in) {}

    std::uint8_t u8() { need(1); return in_[pos_++]; }
    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
        return v;
    }
    std::span<std::uint8_t const> bytes(std::size_t n)
    {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    Integer integer()
    {
        std::uint8_t sign = u8();
        if (sign > 1)
            throw checkpoint_corrupt_error("checkpoint: bad sign byte");
        auto mag = bytes(u32());
        Integer v;
        mpz_import(v.get_mpz_t(), mag.size(), -1, 1, -1, 0, mag.data());
        return sign ? Integer(-v) : v;
    }
    bool done() const noexcept { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const
    {
        if (in_.size() - pos_ < n)
            throw checkpoint_corrupt_error("checkpoint: truncated record");
    }

    std::span<std::uint8_t const> in_;
    std::size_t pos_ = 0;
};

inline std::uint32_t crc(std::span<std::uint8_t const> data)
{
    uLong c = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks
    std::size_t off = 0;
    while (off < data.size()) {
        auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
        c = crc32(c, data.data() + off, n);
        off += n;
    }
    return static_cast<std::uint32_t>(c);
}

} // namespace detail

/**
 * Markov numbers in increasing order, by best-first expansion of the
 * Markov tree from (1, 1, 1).
 *
 * Every tree node is emitted exactly once. A node whose maximum repeats the
 * previous one is flagged as a duplicate: such a node would be a
 * counterexample to uniqueness. Ties are broken on (max, y, x), so
 * duplicates are always adjacent.
 *
 * Single owner; not safe for concurrent use.
 */
class MarkovStream {
public:
    MarkovStream() { heap_.push_back({MarkovTriple::unit()}); }

    Emission next()
    {
        std::pop_heap(heap_.begin(), heap_.end(), later);
        FrontierNode node = std::move(heap_.back());
        heap_.pop_back();
        for (auto& child : tree_successors(node.triple)) {
            heap_.push_back({std::move(child)});
            std::push_heap(heap_.begin(), heap_.end(), later);
        }
        bool const duplicate = last_.has_value() && last_->z() == node.max();
        ++emitted_;
        if (!duplicate)
            ++distinct_;
        last_ = node.triple;
        return {distinct_, emitted_, std::move(node.triple), duplicate};
    }

    /// Maximum of the node next() will return.
    Integer const& peek_max() const noexcept { return heap_.front().max(); }

    std::uint64_t distinct_count() const noexcept { return distinct_; }
    std::uint64_t emitted_count() const noexcept { return emitted_; }
    std::size_t frontier_size() const noexcept { return heap_.size(); }
    std::optional<MarkovTriple> const& last() const noexcept { return last_; }

    /**
     * Versioned, checksummed image of the stream:
     *
     *   "MKVS" | u32 version | u64 payload length | payload | u32 crc32(payload)
     *
     * The payload holds the counters, the last emitted triple and the heap
     * array in storage order, so restore() resumes byte-for-byte.
     */
    CheckpointBlob checkpoint() const
    {
        detail::ByteWriter payload;
        payload.u64(emitted_);
        payload.u64(distinct_);
        payload.u8(last_ ? 1 : 0);
        if (last_)
            write_triple(payload, *last_);
        payload.u64(heap_.size());
        for (auto const& node : heap_)
            write_triple(payload, node.triple);

        detail::ByteWriter out;
        out.bytes(detail::checkpoint_magic);
        out.u32(detail::checkpoint_version);
        out.u64(payload.data().size());
        out.bytes(payload.data());
        out.u32(detail::crc(payload.data()));
        return std::move(out.data());
    }

    static MarkovStream restore(std::span<std::uint8_t const> blob)
    {
        detail::ByteReader in(blob);
        auto magic = in.bytes(4);
        if (!std::equal(magic.begin(), magic.end(), std::begin(detail::checkpoint_magic)))
            throw checkpoint_corrupt_error("checkpoint: bad magic");
        std::uint32_t version = in.u32();
        if (version != detail::checkpoint_version)
            throw checkpoint_version_error("checkpoint: unsupported version " + std::to_string(version)
                                           + " (expected " + std::to_string(detail::checkpoint_version) + ")");
        std::uint64_t length = in.u64();
        if (length > blob.size())
            throw checkpoint_corrupt_error("checkpoint: bad payload length");
        auto payload = in.bytes(static_cast<std::size_t>(length));
        std::uint32_t sum = in.u32();
        if (!in.done())
            throw checkpoint_corrupt_error("checkpoint: trailing bytes");
        if (sum != detail::crc(payload))
            throw checkpoint_corrupt_error("checkpoint: checksum mismatch");

        detail::ByteReader body(payload);
        MarkovStream s;
        s.heap_.clear();
        s.emitted_ = body.u64();
        s.distinct_ = body.u64();
        std::uint8_t has_last = body.u8();
        if (has_last > 1)
            throw checkpoint_corrupt_error("checkpoint: bad flag");
        if (has_last)
            s.last_ = read_triple(body);
        std::uint64_t count = body.u64();
        if (count == 0)
            throw checkpoint_corrupt_error("checkpoint: empty frontier");
        for (std::uint64_t i = 0; i < count; ++i)
            s.heap_.push_back({read_triple(body)});
        if (!body.done())
            throw checkpoint_corrupt_error("checkpoint: trailing payload bytes");
        if (!std::is_heap(s.heap_.begin(), s.heap_.end(), later) || s.distinct_ > s.emitted_)
            throw checkpoint_corrupt_error("checkpoint: inconsistent stream state");
        return s;
    }

    void save(std::string const& path) const
    {
        CheckpointBlob blob = checkpoint();
        std::string tmp = path + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f.write(reinterpret_cast<char const*>(blob.data()), static_cast<std::streamsize>(blob.size()));
            if (!f)
                throw std::runtime_error("cannot write checkpoint " + tmp);
        }
        if (std::rename(tmp.c_str(), path.c_str()) != 0)
            throw std::runtime_error("cannot move checkpoint into place: " + path);
    }

    static MarkovStream load(std::string const& path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open checkpoint " + path);
        CheckpointBlob blob((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        return restore(blob);
    }

private:
    // min-heap on (max, y, x)
    static bool later(FrontierNode const& a, FrontierNode const& b) { return b.triple < a.triple; }

    static void write_triple(detail::ByteWriter& w, MarkovTriple const& t)
    {
        w.integer(t.x());
        w.integer(t.y());
        w.integer(t.z());
    }

    static MarkovTriple read_triple(detail::ByteReader& r)
    {
        Integer x = r.integer();
        Integer y = r.integer();
        Integer z = r.integer();
        if (sgn(x) <= 0 || sgn(y) <= 0 || sgn(z) <= 0 || !(x <= y && y <= z))
            throw checkpoint_corrupt_error("checkpoint: malformed triple");
        try {
            return MarkovTriple::make(std::move(x), std::move(y), std::move(z));
        } catch (invalid_triple const& e) {
            throw checkpoint_corrupt_error(std::string("checkpoint: ") + e.what());
        }
    }

    std::vector<FrontierNode> heap_;
    std::uint64_t emitted_ = 0;
    std::uint64_t distinct_ = 0;
    std::optional<MarkovTriple> last_;
};

} // namespace markov

#endif // MARKOV_ENUMERATION_HPP
