#include "unprompt/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace unprompt {

namespace {

constexpr char kMagic[8] = {'U', 'N', 'P', 'R', 'M', 'D', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

// This format is defined little-endian; the targets this builds on are
// little-endian, so values are written raw.
static_assert(sizeof(double) == 8, "checkpoint format needs 64-bit doubles");

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw IoFailure("checkpoint: cannot open '" + path + "' for writing");
    }
    template <typename T>
    void put(const T& v) {
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void put_doubles(const DenseVector& v) {
        out_.write(reinterpret_cast<const char*>(v.data()),
                   static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    void finish() {
        out_.flush();
        if (!out_) throw IoFailure("checkpoint: write failed on '" + path_ + "'");
    }

private:
    std::string path_;
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw MissingCheckpoint("checkpoint: cannot open '" + path + "'");
    }
    template <typename T>
    T get() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        bump(sizeof(T));
        return v;
    }
    void get_doubles(DenseVector& v, std::size_t n) {
        v.resize(n);
        in_.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(n * sizeof(double)));
        bump(n * sizeof(double));
    }
    std::size_t offset() const { return offset_; }

private:
    void bump(std::size_t n) {
        if (!in_ || static_cast<std::size_t>(in_.gcount()) != n) {
            throw IoFailure("checkpoint: '" + path_ + "' truncated at byte offset " +
                            std::to_string(offset_));
        }
        offset_ += n;
    }
    std::string path_;
    std::ifstream in_;
    std::size_t offset_ = 0;
};

}  // namespace

void save_checkpoint(const std::string& path, const DenoiserParams& p,
                     std::uint64_t schedule_hash, std::uint64_t seed) {
    Writer w(path);
    w.put(kMagic);
    w.put(kVersion);
    w.put(static_cast<std::uint32_t>(p.arch.act));
    w.put(static_cast<std::uint32_t>(p.arch.embed_dim));

    const std::vector<int> sizes = p.arch.layer_sizes();
    w.put(static_cast<std::uint32_t>(sizes.size()));
    for (int s : sizes) w.put(static_cast<std::uint32_t>(s));

    w.put(schedule_hash);
    w.put(seed);
    w.put(static_cast<std::uint64_t>(p.opt.step));
    w.put(static_cast<std::uint64_t>(p.theta.size()));
    w.put_doubles(p.theta);
    w.put_doubles(p.opt.m);
    w.put_doubles(p.opt.v);
    w.finish();
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw MissingCheckpoint("checkpoint: no file at '" + path + "'");
    }
    Reader r(path);

    char magic[8];
    for (char& c : magic) c = r.get<char>();
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw IoFailure("checkpoint: '" + path + "' has wrong magic bytes");
    }
    const auto version = r.get<std::uint32_t>();
    if (version != kVersion) {
        throw VersionMismatch("checkpoint: '" + path + "' is format version " +
                              std::to_string(version) + ", expected " +
                              std::to_string(kVersion));
    }

    LoadedCheckpoint out;
    out.params.arch.act = static_cast<Activation>(r.get<std::uint32_t>());
    out.params.arch.embed_dim = static_cast<int>(r.get<std::uint32_t>());

    const auto n_sizes = r.get<std::uint32_t>();
    if (n_sizes < 2 || n_sizes > 64) {
        throw IoFailure("checkpoint: '" + path + "' has implausible layer count " +
                        std::to_string(n_sizes));
    }
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = static_cast<int>(r.get<std::uint32_t>());

    // Reconstruct the arch fields from the width list.
    out.params.arch.data_dim = sizes.back();
    out.params.arch.hidden.assign(sizes.begin() + 1, sizes.end() - 1);
    if (sizes.front() != out.params.arch.data_dim + out.params.arch.embed_dim) {
        throw IoFailure("checkpoint: '" + path + "' input width disagrees with data/embed dims");
    }

    out.meta.schedule_hash = r.get<std::uint64_t>();
    out.meta.seed = r.get<std::uint64_t>();
    out.params.opt.step = r.get<std::uint64_t>();

    const auto n_params = r.get<std::uint64_t>();
    if (n_params != out.params.arch.param_count()) {
        throw IoFailure("checkpoint: '" + path + "' stores " + std::to_string(n_params) +
                        " parameters but the arch needs " +
                        std::to_string(out.params.arch.param_count()));
    }
    r.get_doubles(out.params.theta, n_params);
    r.get_doubles(out.params.opt.m, n_params);
    r.get_doubles(out.params.opt.v, n_params);
    return out;
}

LoadedCheckpoint load_checkpoint_for(const std::string& path, const NoiseSchedule& sched) {
    LoadedCheckpoint ck = load_checkpoint(path);
    if (ck.meta.schedule_hash != sched.hash()) {
        throw ScheduleMismatch("checkpoint: '" + path +
                               "' was produced under a different noise schedule");
    }
    return ck;
}

}  // namespace unprompt
