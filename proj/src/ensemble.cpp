#include "nmsse/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

namespace nmsse {

namespace {

constexpr std::uint64_t kBlockSize = 16;

// Per grid point: [x, y, z, n, x^2, y^2, z^2, n^2] when the model is a
// two-level system, followed by re/im of every density element.
struct Layout {
    Eigen::Index dim;
    bool bloch;
    std::size_t stride;

    explicit Layout(Eigen::Index d)
        : dim(d), bloch(d == 2), stride((d == 2 ? 8 : 0) + 2 * static_cast<std::size_t>(d * d)) {}
    std::size_t density_offset() const { return bloch ? 8 : 0; }
};

class SumObserver : public TrajectoryObserver {
public:
    SumObserver(const Layout& layout, bool normalize, std::vector<double>& sums)
        : layout_(layout), normalize_(normalize), sums_(sums) {}

    void reset() { max_drift_ = 0.0; }
    double max_drift() const { return max_drift_; }

    void on_point(std::size_t index, const SystemState& psi) override {
        const double n2 = psi.squaredNorm();
        max_drift_ = std::max(max_drift_, std::abs(std::sqrt(n2) - 1.0));
        const double scale = normalize_ ? 1.0 / n2 : 1.0;
        double* row = sums_.data() + index * layout_.stride;

        if (layout_.bloch) {
            const Complex w = psi(0) * std::conj(psi(1));
            const double pe = std::norm(psi(0)), pb = std::norm(psi(1));
            const double v[4] = {2.0 * w.real() * scale, 2.0 * w.imag() * scale, (pe - pb) * scale,
                                 (pe + pb) * scale};
            for (int c = 0; c < 4; ++c) {
                row[c] += v[c];
                row[4 + c] += v[c] * v[c];
            }
        }
        double* rho = row + layout_.density_offset();
        const auto d = layout_.dim;
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                const Complex e = psi(r) * std::conj(psi(c)) * scale;
                rho[2 * (r * d + c)] += e.real();
                rho[2 * (r * d + c) + 1] += e.imag();
            }
        }
    }

private:
    const Layout& layout_;
    bool normalize_;
    std::vector<double>& sums_;
    double max_drift_ = 0.0;
};

// Fixed binary tree over block indices [0, blocks): a node covering [lo, hi)
// splits at lo + (hi - lo) / 2. Partial sums are merged as left += right as
// soon as both children are available.
class ReductionTree {
public:
    explicit ReductionTree(std::size_t blocks) {
        leaf_.resize(blocks);
        build(0, blocks, kNone);
        done_.assign(nodes_.size(), false);
        partial_.resize(nodes_.size());
    }

    void submit(std::size_t block, std::vector<double> sums) {
        std::size_t node = leaf_[block];
        for (;;) {
            const std::size_t parent = nodes_[node].parent;
            if (parent == kNone) {
                root_ = std::move(sums);
                return;
            }
            const bool is_left = nodes_[parent].left == node;
            const std::size_t sibling = is_left ? nodes_[parent].right : nodes_[parent].left;
            std::vector<double> other;
            {
                std::lock_guard lock(mutex_);
                if (!done_[sibling]) {
                    partial_[node] = std::move(sums);
                    done_[node] = true;
                    return;
                }
                other = std::move(partial_[sibling]);
            }
            std::vector<double>& left = is_left ? sums : other;
            const std::vector<double>& right = is_left ? other : sums;
            for (std::size_t i = 0; i < left.size(); ++i) left[i] += right[i];
            if (!is_left) sums = std::move(other);
            node = parent;
        }
    }

    std::vector<double> take_root() { return std::move(root_); }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    struct Node {
        std::size_t parent, left, right;
    };

    std::size_t build(std::size_t lo, std::size_t hi, std::size_t parent) {
        const std::size_t id = nodes_.size();
        nodes_.push_back({parent, kNone, kNone});
        if (hi - lo == 1) {
            leaf_[lo] = id;
        } else {
            const std::size_t mid = lo + (hi - lo) / 2;
            const std::size_t l = build(lo, mid, id);
            const std::size_t r = build(mid, hi, id);
            nodes_[id].left = l;
            nodes_[id].right = r;
        }
        return id;
    }

    std::vector<Node> nodes_;
    std::vector<std::size_t> leaf_;
    std::vector<bool> done_;
    std::vector<std::vector<double>> partial_;
    std::vector<double> root_;
    std::mutex mutex_;
};

void append_field(std::string& s, const char* key, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    s += key;
    s += '=';
    s.append(buf, r.ptr);
    s += ';';
}

void append_field(std::string& s, const char* key, const std::string& v) {
    s += key;
    s += '=';
    s += v;
    s += ';';
}

}  // namespace

EnsembleError::EnsembleError(std::vector<Failure> failures)
    : Error([&] {
          std::string msg = std::to_string(failures.size()) + " trajectory failure(s)";
          for (std::size_t i = 0; i < failures.size() && i < 5; ++i)
              msg += "; " + failures[i].message;
          return msg;
      }()),
      failures_(std::move(failures)) {}

std::string config_hash(const ScenarioParams& p, std::uint64_t n_traj, std::uint64_t master_seed) {
    std::string s;
    append_field(s, "unraveling", to_string(p.unraveling));
    append_field(s, "variant", to_string(p.variant));
    append_field(s, "g", p.g);
    append_field(s, "delta", p.delta);
    append_field(s, "gamma", p.gamma);
    append_field(s, "dt", p.dt);
    append_field(s, "t_final", p.t_final);
    append_field(s, "girsanov", p.girsanov == GirsanovEvaluation::direct ? "direct" : "accumulated");
    append_field(s, "scheme", p.markov_scheme == MarkovScheme::ito_euler ? "ito" : "stratonovich");
    append_field(s, "n_traj", std::to_string(n_traj));
    append_field(s, "seed", std::to_string(master_seed));

    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    const auto r = std::to_chars(buf, buf + sizeof buf, h, 16);
    std::string hex(buf, r.ptr);
    return std::string(16 - hex.size(), '0') + hex;
}

EnsembleResult run_ensemble(const Scenario& scenario, std::uint64_t n_traj, std::uint64_t master_seed,
                            const EnsembleOptions& options) {
    if (n_traj < 1) throw std::invalid_argument("ensemble: n_traj must be at least 1");
    const auto& grid = scenario.grid();
    const Layout layout(scenario.model().dimension());
    const bool normalize = scenario.params().variant == Variant::actual;
    const std::size_t blocks = static_cast<std::size_t>((n_traj + kBlockSize - 1) / kBlockSize);

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

    ReductionTree tree(blocks);
    std::vector<double> drift(n_traj, 0.0);
    std::vector<EnsembleError::Failure> failures;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            std::vector<double> sums(grid.size() * layout.stride, 0.0);
            SumObserver obs(layout, normalize, sums);
            const std::uint64_t first = b * kBlockSize;
            const std::uint64_t last = std::min<std::uint64_t>(first + kBlockSize, n_traj);
            for (std::uint64_t k = first; k < last; ++k) {
                obs.reset();
                try {
                    simulate_trajectory(scenario, master_seed, k, obs);
                } catch (const std::exception& e) {
                    std::lock_guard lock(failure_mutex);
                    failures.push_back({k, e.what()});
                }
                drift[k] = obs.max_drift();
            }
            tree.submit(b, std::move(sums));
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
        throw EnsembleError(std::move(failures));
    }

    const std::vector<double> sums = tree.take_root();
    EnsembleResult res{grid, {}, {}, {}, n_traj, master_seed, {}, {}};
    res.config_hash = config_hash(scenario.params(), n_traj, master_seed);
    res.max_norm_drift = std::move(drift);

    const double n = static_cast<double>(n_traj);
    const auto d = layout.dim;
    res.mean_density.reserve(grid.size());
    if (layout.bloch) {
        res.mean_bloch.reserve(grid.size());
        res.bloch_se.reserve(grid.size());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double* row = sums.data() + i * layout.stride;
        if (layout.bloch) {
            double mean[4], se[4];
            for (int c = 0; c < 4; ++c) {
                mean[c] = row[c] / n;
                const double var = n > 1.0 ? std::max(0.0, (row[4 + c] - n * mean[c] * mean[c]) / (n - 1.0)) : 0.0;
                se[c] = std::sqrt(var / n);
                mean[c] += 0.0;
            }
            res.mean_bloch.push_back({mean[0], mean[1], mean[2], mean[3]});
            res.bloch_se.push_back({se[0], se[1], se[2], se[3]});
        }
        const double* rho = row + layout.density_offset();
        DensityMatrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                m(r, c) = Complex(rho[2 * (r * d + c)] / n, rho[2 * (r * d + c) + 1] / n);
        res.mean_density.push_back(std::move(m));
    }
    return res;
}

double DeviationReport::max_deviation() const { return *std::max_element(max_abs.begin(), max_abs.end()); }

double DeviationReport::min_inside_fraction() const {
    return *std::min_element(inside_fraction.begin(), inside_fraction.end());
}

namespace {

DeviationReport build_report(const std::vector<BlochVector>& a, const std::vector<BlochVector>& b,
                             const std::vector<BlochVector>& se_a, const std::vector<BlochVector>* se_b,
                             double tolerance) {
    DeviationReport rep;
    rep.tolerance = tolerance;
    const std::size_t n = a.size();
    rep.deviation.resize(n);
    rep.envelope.resize(n);
    std::array<std::size_t, 3> inside{};
    for (std::size_t i = 0; i < n; ++i) {
        const double da[3] = {a[i].x, a[i].y, a[i].z};
        const double db[3] = {b[i].x, b[i].y, b[i].z};
        const double sa[3] = {se_a[i].x, se_a[i].y, se_a[i].z};
        double sb[3] = {0.0, 0.0, 0.0};
        if (se_b) sb[0] = (*se_b)[i].x, sb[1] = (*se_b)[i].y, sb[2] = (*se_b)[i].z;
        for (int c = 0; c < 3; ++c) {
            const double dev = std::abs(da[c] - db[c]);
            const double env = 3.0 * std::sqrt(sa[c] * sa[c] + sb[c] * sb[c]);
            rep.deviation[i][c] = dev;
            rep.envelope[i][c] = env;
            rep.max_abs[c] = std::max(rep.max_abs[c], dev);
            if (dev <= env) ++inside[c];
        }
    }
    for (int c = 0; c < 3; ++c)
        rep.inside_fraction[c] = n == 0 ? 1.0 : static_cast<double>(inside[c]) / static_cast<double>(n);
    rep.passed = rep.max_deviation() <= tolerance;
    return rep;
}

}  // namespace

DeviationReport compare(const EnsembleResult& result, const TimeGrid& reference_grid,
                        const std::vector<BlochVector>& reference, double tolerance) {
    if (!(reference_grid == result.grid) || reference.size() != result.grid.size())
        throw std::invalid_argument("compare: reference grid does not match the ensemble grid");
    if (result.mean_bloch.size() != result.grid.size())
        throw std::invalid_argument("compare: ensemble has no Bloch components");
    return build_report(result.mean_bloch, reference, result.bloch_se, nullptr, tolerance);
}

DeviationReport compare(const EnsembleResult& a, const EnsembleResult& b, double tolerance) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("compare: ensemble grids differ");
    if (a.mean_bloch.size() != a.grid.size() || b.mean_bloch.size() != b.grid.size())
        throw std::invalid_argument("compare: ensemble has no Bloch components");
    return build_report(a.mean_bloch, b.mean_bloch, a.bloch_se, &b.bloch_se, tolerance);
}

double min_eigenvalue(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("min_eigenvalue: matrix must be square");
    const CMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace nmsse
