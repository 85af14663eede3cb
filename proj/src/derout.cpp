#include "modlie/derout.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace modlie {

// ---------------------------------------------------------------- Leibniz check

namespace {

std::vector<SparseVector> columns_of(const FpMatrix& m) {
    std::vector<SparseVector> cols(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r)) cols[e.col].push_back({std::uint32_t(r), e.val});
    return cols;
}

SparseVector unit(std::size_t i) { return {Entry{std::uint32_t(i), 1}}; }

}  // namespace

std::optional<LeibnizDefect> leibniz_defect(const LieAlgebra& l, const FpMatrix& m) {
    const std::size_t n = l.dim();
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch("derivation candidate must be dim x dim");
    const Field& f = l.field();
    const auto cols = columns_of(m);
    SparseVector scratch;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            SparseVector res;
            for (const auto& e : l.structure(i, j)) sparse_axpy(f, res, e.val, cols[e.col], scratch);
            sparse_axpy(f, res, f.neg(1), l.bracket(cols[i], unit(j)), scratch);
            sparse_axpy(f, res, f.neg(1), l.bracket(unit(i), cols[j]), scratch);
            if (!res.empty()) return LeibnizDefect{i, j, std::move(res)};
        }
    return std::nullopt;
}

bool is_derivation(const LieAlgebra& l, const FpMatrix& m) { return !leibniz_defect(l, m).has_value(); }

// ---------------------------------------------------------------- block solver

namespace {

/// Weights packed into one integer so that key(a + b) = key(a) + key(b).
struct WeightKeys {
    std::vector<std::int64_t> key;  // per basis vector
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> space;

    const std::vector<std::uint32_t>* find(std::int64_t k) const {
        auto it = space.find(k);
        return it == space.end() ? nullptr : &it->second;
    }
};

WeightKeys pack_weights(const LieAlgebra& l) {
    const std::size_t n = l.dim();
    WeightKeys w;
    w.key.assign(n, 0);
    if (const auto& g = l.grading(); g && !g->empty()) {
        int maxabs = 0;
        for (const auto& v : *g)
            for (int c : v) maxabs = std::max(maxabs, std::abs(c));
        // sums of four weights stay strictly inside (-radix/2, radix/2)
        const std::int64_t radix = 8 * std::int64_t(maxabs) + 2;
        const double bits = double((*g)[0].size()) * std::log2(double(radix));
        if (bits < 60) {
            for (std::size_t i = 0; i < n; ++i) {
                std::int64_t k = 0;
                for (std::size_t c = (*g)[i].size(); c-- > 0;) k = k * radix + (*g)[i][c];
                w.key[i] = k;
            }
        }
        // otherwise everything stays in one block, which is slower but still exact
    }
    for (std::size_t i = 0; i < n; ++i) w.space[w.key[i]].push_back(std::uint32_t(i));
    return w;
}

struct Block {
    std::int64_t delta;
    std::vector<std::uint32_t> cols;  // global unknown indices, ascending
};

class BlockSolver {
  public:
    BlockSolver(const LieAlgebra& l, const WeightKeys& w, ResourceGuard* guard)
        : l_(l), w_(w), guard_(guard), n_(l.dim()), local_(n_ * n_, -1) {}

    /// Der_delta in global coordinates, rows in reduced echelon form.
    std::vector<SparseVector> solve(const Block& b, std::uint64_t& equations) {
        const Field& f = l_.field();
        const std::size_t u = b.cols.size();
        for (std::size_t t = 0; t < u; ++t) local_[b.cols[t]] = std::int32_t(t);
        StreamingNullspace ns(f, u, guard_);

        std::vector<std::vector<std::pair<std::uint32_t, Residue>>> eqs;
        for (std::size_t i = 0; i < n_ && ns.rank() < u; ++i) {
            const auto* vi = w_.find(w_.key[i] + b.delta);
            for (std::size_t j = i + 1; j < n_ && ns.rank() < u; ++j) {
                const auto* vt = w_.find(w_.key[i] + w_.key[j] + b.delta);
                if (!vt) continue;
                const auto* vj = w_.find(w_.key[j] + b.delta);
                eqs.assign(vt->size(), {});
                auto slot = [&](std::uint32_t m) {
                    return std::size_t(std::lower_bound(vt->begin(), vt->end(), m) - vt->begin());
                };
                auto put = [&](std::size_t s, std::size_t k, std::size_t l, Residue c) {
                    const std::int32_t col = local_[k * n_ + l];
                    if (col < 0) throw std::logic_error("grading inconsistent with Leibniz system");
                    eqs[s].push_back({std::uint32_t(col), c});
                };
                // sum_k c_ij^k M_mk
                for (const auto& e : l_.structure(i, j))
                    for (std::size_t s = 0; s < vt->size(); ++s) put(s, (*vt)[s], e.col, e.val);
                // - sum_l c_lj^m M_li
                if (vi)
                    for (std::uint32_t lv : *vi) {
                        if (lv == j) continue;
                        const bool flip = lv > j;
                        const auto& br = flip ? l_.structure(j, lv) : l_.structure(lv, j);
                        for (const auto& e : br) put(slot(e.col), lv, i, flip ? e.val : f.neg(e.val));
                    }
                // - sum_l c_il^m M_lj
                if (vj)
                    for (std::uint32_t lv : *vj) {
                        if (lv == i) continue;
                        const bool flip = i > lv;
                        const auto& br = flip ? l_.structure(lv, i) : l_.structure(i, lv);
                        for (const auto& e : br) put(slot(e.col), lv, j, flip ? e.val : f.neg(e.val));
                    }
                for (auto& eq : eqs) {
                    if (eq.empty()) continue;
                    std::sort(eq.begin(), eq.end());
                    SparseVector row;
                    for (const auto& [c, v] : eq) {
                        if (!row.empty() && row.back().col == c)
                            row.back().val = f.add(row.back().val, v);
                        else
                            row.push_back({c, v});
                    }
                    std::erase_if(row, [](const Entry& e) { return e.val == 0; });
                    if (row.empty()) continue;
                    ++equations;
                    ns.add_equation(std::move(row));
                }
            }
        }

        const Subspace local = ns.solve();
        for (std::uint32_t c : b.cols) local_[c] = -1;
        std::vector<SparseVector> rows;
        rows.reserve(local.dim());
        for (const auto& r : local.basis()) {
            SparseVector g;
            g.reserve(r.size());
            for (const auto& e : r) g.push_back({b.cols[e.col], e.val});
            rows.push_back(std::move(g));
        }
        return rows;
    }

  private:
    const LieAlgebra& l_;
    const WeightKeys& w_;
    ResourceGuard* guard_;
    std::size_t n_;
    std::vector<std::int32_t> local_;
};

Subspace solve_derivations(const LieAlgebra& l, const DerivationOptions& opts, DerivationStats& st) {
    const std::size_t n = l.dim();
    const WeightKeys w = pack_weights(l);

    std::map<std::int64_t, std::size_t> block_of;
    std::vector<Block> blocks;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c) {
            const std::int64_t d = w.key[k] - w.key[c];
            auto [it, fresh] = block_of.try_emplace(d, blocks.size());
            if (fresh) blocks.push_back({d, {}});
            blocks[it->second].cols.push_back(std::uint32_t(k * n + c));
        }
    st.blocks = blocks.size();
    st.unknowns = n * n;

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, blocks.size()));
    st.threads = threads;

    std::vector<std::vector<SparseVector>> results(blocks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> equations{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        BlockSolver solver(l, w, opts.guard);
        std::uint64_t local_eqs = 0;
        try {
            for (std::size_t b; !stop && (b = next.fetch_add(1)) < blocks.size();) {
                if (opts.guard) opts.guard->check();
                results[b] = solver.solve(blocks[b], local_eqs);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            stop = true;
        }
        equations += local_eqs;
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    st.equations = equations;

    // blocks have disjoint supports, so their reduced rows together are the
    // reduced echelon basis of Der once sorted by pivot
    std::vector<SparseVector> rows;
    for (auto& r : results)
        for (auto& v : r) rows.push_back(std::move(v));
    std::sort(rows.begin(), rows.end(), [](const SparseVector& a, const SparseVector& b) { return a[0].col < b[0].col; });
    return Subspace::from_rref(n * n, std::move(rows));
}

}  // namespace

DerivationAlgebra derivation_algebra(const LieAlgebra& l, const DerivationOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    DerivationStats st;
    std::optional<Subspace> der;
    const bool use_cache = opts.cache_dir && !opts.cache_key.empty();
    if (opts.cache_key.find('\n') != std::string::npos) throw InvalidArgument("cache key must be a single line");
    const std::uint64_t hash = use_cache ? structure_hash(l) : 0;
    if (use_cache) der = load_der_cache(*opts.cache_dir, opts.cache_key, hash, l.dim() * l.dim());
    if (der) {
        st.cache_hit = true;
    } else {
        der = solve_derivations(l, opts, st);
        if (use_cache) store_der_cache(*opts.cache_dir, opts.cache_key, hash, *der);
    }
    DerivationAlgebra d(l, std::move(*der));
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d.stats = st;
    return d;
}

// ---------------------------------------------------------------- Der, Inn

DerivationAlgebra::DerivationAlgebra(LieAlgebra base, Subspace der)
    : base_(std::move(base)), der_(std::move(der)), inn_(0) {
    const std::size_t n = base_.dim();
    if (der_.ambient_dim() != n * n) throw DimensionMismatch("Der basis has the wrong ambient dimension");
    Echelon e(base_.field(), der_.dim());
    for (std::size_t i = 0; i < n; ++i) e.insert(to_sparse(der_.pivot_coordinates(base_.adjoint_basis(i).flatten())));
    inn_ = e.to_subspace();
}

FpMatrix DerivationAlgebra::map(std::size_t k) const {
    const std::size_t n = base_.dim();
    return FpMatrix::unflatten(der_.basis().at(k), n, n);
}

std::optional<DenseVector> DerivationAlgebra::coordinates(const FpMatrix& m) const {
    if (m.rows() != base_.dim() || m.cols() != base_.dim()) throw DimensionMismatch("map must be dim x dim");
    return der_.coordinates(base_.field(), m.flatten());
}

LieAlgebra DerivationAlgebra::as_lie() const {
    const Field& f = base_.field();
    const std::size_t d = dim();
    if (d == 0) throw DegenerateAlgebra("Der(L) is zero");
    std::vector<FpMatrix> maps;
    for (std::size_t k = 0; k < d; ++k) maps.push_back(map(k));
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < d; ++k) labels.push_back("d" + std::to_string(k + 1));
    LieAlgebraBuilder b(f, std::move(labels));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = a + 1; c < d; ++c)
            b.set_bracket(a, c, to_sparse(der_.pivot_coordinates(commutator(f, maps[a], maps[c]).flatten())));
    return std::move(b).build();
}

// ---------------------------------------------------------------- Out

OutAlgebra::OutAlgebra(const DerivationAlgebra& der) : der_(&der) {
    const auto& piv = der.inn().pivots();
    for (std::size_t k = 0, t = 0; k < der.dim(); ++k) {
        if (t < piv.size() && piv[t] == k) {
            ++t;
            continue;
        }
        reps_.push_back(k);
    }
    if (reps_.empty()) return;

    const Field& f = der.base().field();
    std::vector<FpMatrix> maps;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < reps_.size(); ++k) {
        maps.push_back(der.map(reps_[k]));
        labels.push_back("o" + std::to_string(k + 1));
    }
    LieAlgebraBuilder b(f, std::move(labels));
    for (std::size_t a = 0; a < maps.size(); ++a)
        for (std::size_t c = a + 1; c < maps.size(); ++c) {
            const DenseVector coords = der.member_coordinates(commutator(f, maps[a], maps[c]).flatten());
            b.set_bracket(a, c, to_sparse(project_der(coords)));
        }
    lie_ = std::move(b).build();
}

DenseVector OutAlgebra::project_der(const DenseVector& der_coords) const {
    const Field& f = der_->base().field();
    // the reduced vector vanishes on Inn's pivots, i.e. lives on the representatives
    const SparseVector red = der_->inn().reduce(f, to_sparse(der_coords));
    DenseVector out(reps_.size(), 0);
    for (const auto& e : red) {
        auto it = std::lower_bound(reps_.begin(), reps_.end(), std::size_t(e.col));
        out[std::size_t(it - reps_.begin())] = e.val;
    }
    return out;
}

DenseVector OutAlgebra::project(const FpMatrix& m) const {
    auto c = der_->coordinates(m);
    if (!c) throw InvalidArgument("map is not a derivation");
    return project_der(*c);
}

bool OutAlgebra::is_inner(const FpMatrix& m) const {
    const DenseVector v = project(m);
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

LieAlgebra out_in_generators(const OutAlgebra& out, const std::vector<NamedMap>& gens) {
    const std::size_t k = out.dim();
    if (gens.size() != k)
        throw InvalidArgument("expected " + std::to_string(k) + " generators, got " + std::to_string(gens.size()));
    if (k == 0) throw DegenerateAlgebra("Out(L) is zero");
    const Field& f = out.lie()->field();
    FpMatrix p(k, k);
    for (std::size_t c = 0; c < k; ++c) {
        const DenseVector col = out.project(gens[c].map);
        for (std::size_t r = 0; r < k; ++r) p.set(r, c, col[r]);
    }
    auto pinv = inverse(f, p);
    if (!pinv) throw InvalidArgument("generator classes are linearly dependent in Out");
    std::vector<std::string> labels;
    for (const auto& g : gens) labels.push_back(g.name);
    LieAlgebraBuilder b(f, std::move(labels));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = a + 1; c < k; ++c) {
            const DenseVector y = out.project(commutator(f, gens[a].map, gens[c].map));
            b.set_bracket(a, c, to_sparse(pinv->apply(f, y)));
        }
    return std::move(b).build();
}

// ---------------------------------------------------------------- cache

std::uint64_t fnv1a(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t structure_hash(const LieAlgebra& l) { return fnv1a(to_text(l)); }

namespace {

constexpr const char* kCacheMagic = "modlie-dercache v1";

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class FileLock {
  public:
    FileLock(const std::filesystem::path& p, bool exclusive) {
        fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ >= 0 && ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
    bool held() const noexcept { return fd_ >= 0; }

  private:
    int fd_ = -1;
};

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
bool get(std::istream& is, T& v) {
    return bool(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

std::filesystem::path der_cache_file(const std::filesystem::path& dir, const std::string& key) {
    return dir / (hex64(fnv1a(key)) + ".der");
}

std::optional<Subspace> load_der_cache(const std::filesystem::path& dir, const std::string& key,
                                       std::uint64_t structure, std::size_t ambient) {
    const auto file = der_cache_file(dir, key);
    std::error_code ec;
    if (!std::filesystem::exists(file, ec)) return std::nullopt;
    FileLock lock(file.string() + ".lock", false);
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;

    auto expect = [&](const std::string& want) {
        std::string line;
        return std::getline(in, line) && line == want;
    };
    std::size_t rows = 0, nnz = 0;
    auto read_count = [&](const std::string& name, std::size_t& out) {
        std::string line;
        if (!std::getline(in, line) || line.rfind(name + " ", 0) != 0) return false;
        std::istringstream ss(line.substr(name.size() + 1));
        return bool(ss >> out);
    };
    if (!expect(kCacheMagic) || !expect("key " + key) || !expect(std::string("code_version ") + kCodeVersion) ||
        !expect("structure_hash " + hex64(structure)) || !expect("ambient " + std::to_string(ambient)) ||
        !read_count("rows", rows) || !read_count("nnz", nnz) || !expect("data"))
        return std::nullopt;

    std::vector<SparseVector> basis(rows);
    std::size_t seen = 0;
    for (auto& r : basis) {
        std::uint32_t len = 0;
        if (!get(in, len)) return std::nullopt;
        r.resize(len);
        for (auto& e : r)
            if (!get(in, e.col) || !get(in, e.val) || e.col >= ambient) return std::nullopt;
        seen += len;
    }
    if (seen != nnz || in.peek() != std::char_traits<char>::eof()) return std::nullopt;
    try {
        return Subspace::from_rref(ambient, std::move(basis));
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

void store_der_cache(const std::filesystem::path& dir, const std::string& key, std::uint64_t structure,
                     const Subspace& der) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());
    const auto file = der_cache_file(dir, key);
    FileLock lock(file.string() + ".lock", true);
    if (!lock.held()) throw IoError("cannot lock cache file " + file.string());

    const auto tmp = std::filesystem::path(file.string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        std::size_t nnz = 0;
        for (const auto& r : der.basis()) nnz += r.size();
        out << kCacheMagic << '\n'
            << "key " << key << '\n'
            << "code_version " << kCodeVersion << '\n'
            << "structure_hash " << hex64(structure) << '\n'
            << "ambient " << der.ambient_dim() << '\n'
            << "rows " << der.dim() << '\n'
            << "nnz " << nnz << '\n'
            << "data\n";
        for (const auto& r : der.basis()) {
            put(out, std::uint32_t(r.size()));
            for (const auto& e : r) {
                put(out, e.col);
                put(out, e.val);
            }
        }
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw IoError("cannot move cache file into place: " + ec.message());
}

}  // namespace modlie
