#include "trapbose/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapbose {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

SecularSystem::SecularSystem(const RadialBasis& basis, const InteractionMatrix& v)
    : l_(basis.angular_momentum()),
      hbar_omega_(basis.energy_quantum()),
      e0_(basis.unperturbed_energies()),
      v_(v.entries),
      v_zero_(v.is_zero()) {
    if (v.l != basis.angular_momentum())
        throw std::invalid_argument("secular system: interaction channel l=" +
                                    std::to_string(v.l) + " does not match basis l=" +
                                    std::to_string(basis.angular_momentum()));
    if (v.size != basis.size() || v_.rows() != basis.size() || v_.cols() != basis.size())
        throw std::invalid_argument("secular system: interaction matrix size does not match basis size");
}

double SecularSystem::distance_to_pole(double energy) const {
    double d = kInf;
    for (int n = 0; n < size(); ++n)
        d = std::min(d, std::abs(energy - e0_[n]));
    return d;
}

Eigen::MatrixXd SecularSystem::kernel_matrix(double energy) const {
    const int n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int row = 0; row < n; ++row) {
        const double denom = energy - e0_[row];
        for (int col = 0; col < n; ++col)
            m(row, col) -= v_(row, col) / denom;
    }
    return m;
}

DetValue SecularSystem::determinant(double energy) const {
    if (distance_to_pole(energy) < pole_guard())
        throw std::domain_error("secular determinant evaluated within the pole guard band at E=" +
                                std::to_string(energy));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kernel_matrix(energy));
    DetValue det;
    det.sign = static_cast<double>(lu.permutationP().determinant());
    det.log_abs = 0.0;
    const auto diag = lu.matrixLU().diagonal();
    for (int i = 0; i < diag.size(); ++i) {
        const double u = diag[i];
        if (u == 0.0) {
            det.sign = 0.0;
            det.log_abs = -kInf;
            return det;
        }
        if (u < 0.0) det.sign = -det.sign;
        det.log_abs += std::log(std::abs(u));
    }
    return det;
}

namespace {

// Bisection until the bracket is narrow, then secant steps kept inside the
// bracket; falls back to bisection whenever a secant step is unusable.
double refine_root(const SecularSystem& sys, double a, double b, double sa) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
    double va = kNaN, vb = kNaN;
    for (int iter = 0; iter < 220 && b - a > tol; ++iter) {
        double mid = kNaN;
        if (std::isfinite(va) && std::isfinite(vb) && vb != va) {
            const double step = vb * (b - a) / (vb - va);
            const double cand = b - step;
            if (cand > a + 0.1 * tol && cand < b - 0.1 * tol) mid = cand;
        }
        if (!std::isfinite(mid)) mid = 0.5 * (a + b);
        const DetValue dm = sys.determinant(mid);
        const double vm = dm.value();
        if (dm.sign == 0.0) return mid;
        if (dm.sign == sa) {
            a = mid; va = vm;
        } else {
            b = mid; vb = vm;
        }
    }
    return 0.5 * (a + b);
}

struct Bracket {
    double a, b;
    double sa;
};

// Sign-scan [lo, hi] with `segments` panels, collecting sign-change brackets.
void scan_interval(const SecularSystem& sys, double lo, double hi, int segments,
                   std::vector<Bracket>& out, std::vector<double>& exact_hits) {
    if (!(hi > lo)) return;
    double prev_x = lo;
    double prev_s = sys.determinant(lo).sign;
    for (int i = 1; i <= segments; ++i) {
        const double x = lo + (hi - lo) * (static_cast<double>(i) / segments);
        const double s = sys.determinant(x).sign;
        if (s == 0.0) {
            exact_hits.push_back(x);
            prev_x = x;
            prev_s = s;
            continue;
        }
        if (prev_s != 0.0 && s != prev_s) out.push_back({prev_x, x, prev_s});
        prev_x = x;
        prev_s = s;
    }
}

int dominant_index(const Eigen::VectorXd& k) {
    int best = 0;
    k.cwiseAbs().maxCoeff(&best);
    return best;
}

void fix_vector_sign(Eigen::VectorXd& k) {
    const double top = k.cwiseAbs().maxCoeff();
    for (int i = 0; i < k.size(); ++i) {
        if (std::abs(k[i]) > 1e-12 * top) {
            if (k[i] < 0.0) k = -k;
            return;
        }
    }
}

} // namespace

std::vector<SpectralSolution> find_levels(const SecularSystem& sys, int count,
                                          const FindLevelsOptions& opts) {
    const int n = sys.size();
    if (count < 1 || count > n)
        throw std::invalid_argument("find_levels: count must lie in [1, N], got " +
                                    std::to_string(count) + " with N=" + std::to_string(n));
    const Eigen::VectorXd& e0 = sys.unperturbed_energies();
    const double hw = sys.energy_quantum();

    std::vector<SpectralSolution> out;
    out.reserve(count);

    if (sys.interaction_is_zero()) {
        // Exact non-interacting limit: poles and roots cancel pairwise.
        for (int k = 0; k < count; ++k) {
            SpectralSolution s;
            s.n1 = k;
            s.l = sys.channel();
            s.energy = e0[k];
            s.unperturbed_energy = e0[k];
            s.coefficients = Eigen::VectorXd::Zero(n);
            s.coefficients[k] = 1.0;
            s.truncation = n;
            out.push_back(std::move(s));
        }
        return out;
    }

    // Independent route: eigen-decomposition of H = diag(E0) + V.
    Eigen::MatrixXd h = sys.interaction();
    h.diagonal() += e0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success)
        throw SolverError("eigen-decomposition of the truncated Hamiltonian failed");
    const Eigen::VectorXd lam = eig.eigenvalues();  // ascending

    // Search window: Gershgorin radius keeps every root inside [lo, hi].
    double radius = 0.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, sys.interaction().row(i).cwiseAbs().sum());
    double lo = e0[0] - radius - hw;
    double hi = e0[n - 1] + radius + hw;
    for (int guard = 0; sys.determinant(lo).sign < 0.0; ++guard) {
        if (guard >= 6) throw SolverError("no positive-determinant floor below the spectrum");
        lo -= 2.0 * (radius + hw);
    }
    for (int guard = 0; sys.determinant(hi).sign < 0.0; ++guard) {
        if (guard >= 6) throw SolverError("no positive-determinant ceiling above the spectrum");
        hi += 2.0 * (radius + hw);
    }

    // Scan every inter-pole interval, clipped clear of the guard bands.
    const double clip = 2.0 * sys.pole_guard();
    std::vector<Bracket> brackets;
    std::vector<double> exact_hits;
    for (int seg = 0; seg <= n; ++seg) {
        const double a = (seg == 0) ? lo : e0[seg - 1] + clip;
        const double b = (seg == n) ? hi : e0[seg] - clip;
        scan_interval(sys, a, b, opts.scan_segments, brackets, exact_hits);
    }

    std::vector<double> roots = exact_hits;
    for (const Bracket& br : brackets)
        roots.push_back(refine_root(sys, br.a, br.b, br.sa));
    std::sort(roots.begin(), roots.end());

    // Pair roots with oracle eigenvalues; rescan finely near any eigenvalue the
    // coarse sweep missed (shift smaller than a panel, or paired roots).
    std::vector<int> match(n, -1);  // eigenvalue index -> root index
    std::vector<bool> used(roots.size(), false);
    auto pair_up = [&]() {
        std::fill(match.begin(), match.end(), -1);
        std::fill(used.begin(), used.end(), false);
        for (int k = 0; k < n; ++k) {
            int best = -1;
            double best_gap = kInf;
            for (int r = 0; r < static_cast<int>(roots.size()); ++r) {
                if (used[r]) continue;
                const double gap = std::abs(roots[r] - lam[k]);
                if (gap < best_gap) {
                    best_gap = gap;
                    best = r;
                }
            }
            if (best >= 0 && best_gap < 0.45 * hw) {
                match[k] = best;
                used[best] = true;
            }
        }
    };
    pair_up();

    std::vector<bool> flagged(n, false);
    bool rescanned = false;
    for (int k = 0; k < n; ++k) {
        if (match[k] >= 0) continue;
        // Focused rescan in a window around lam[k], clipped by the pole guard.
        double a = lam[k] - 0.4 * hw;
        double b = lam[k] + 0.4 * hw;
        for (int i = 0; i < n; ++i) {
            if (e0[i] < lam[k] && e0[i] + clip > a) a = e0[i] + clip;
            if (e0[i] >= lam[k] && e0[i] - clip < b) b = e0[i] - clip;
        }
        if (e0[0] > lam[k]) b = std::min(b, e0[0] - clip);
        std::vector<Bracket> extra;
        std::vector<double> extra_hits;
        if (b > a) scan_interval(sys, a, b, opts.rescan_segments, extra, extra_hits);
        bool found = false;
        for (double x : extra_hits) {
            roots.push_back(x);
            found = true;
        }
        for (const Bracket& br : extra) {
            roots.push_back(refine_root(sys, br.a, br.b, br.sa));
            found = true;
        }
        if (found) {
            rescanned = true;
            continue;
        }
        // Near-degenerate cluster: an even-order crossing leaves no sign change.
        bool clustered = false;
        for (int j = 0; j < n; ++j)
            if (j != k && std::abs(lam[j] - lam[k]) < opts.cluster_tol * hw) clustered = true;
        if (clustered || sys.distance_to_pole(lam[k]) < 2.0 * clip) {
            roots.push_back(lam[k]);
            flagged[k] = true;
            rescanned = true;
        } else {
            throw SolverError("determinant root matching eigenvalue " + std::to_string(lam[k]) +
                              " was not bracketed");
        }
    }
    if (rescanned) {
        std::sort(roots.begin(), roots.end());
        used.assign(roots.size(), false);
        pair_up();
        for (int k = 0; k < n; ++k)
            if (match[k] < 0)
                throw SolverError("root/eigenvalue pairing failed after rescan near E=" +
                                  std::to_string(lam[k]));
    }

    for (int k = 0; k < count; ++k) {
        SpectralSolution s;
        s.l = sys.channel();
        s.energy = roots[match[k]];
        s.truncation = n;
        s.degenerate_cluster = flagged[k];
        for (int j = 0; j < n; ++j)
            if (j != k && std::abs(lam[j] - lam[k]) < opts.cluster_tol * hw)
                s.degenerate_cluster = true;

        s.coefficients = eig.eigenvectors().col(k);
        s.coefficients.normalize();
        fix_vector_sign(s.coefficients);

        s.n1 = dominant_index(s.coefficients);
        s.unperturbed_energy = e0[s.n1];
        s.oracle_gap = std::abs(s.energy - lam[k]);
        s.eigen_residual = (h * s.coefficients - s.energy * s.coefficients).cwiseAbs().maxCoeff();
        if (sys.distance_to_pole(s.energy) >= sys.pole_guard())
            s.det_residual = std::exp(sys.determinant(s.energy).log_abs);
        else
            s.det_residual = kNaN;  // only reachable through a flagged cluster fallback

        const int nd = s.n1;
        const double kn = s.coefficients[nd];
        const double vk = sys.interaction().row(nd).dot(s.coefficients);
        s.eq24_gap = std::abs(vk / kn - (s.energy - e0[nd]));

        out.push_back(std::move(s));
    }
    return out;
}

double energy_shift_quotient(const SpectralSolution& sol, const RadialBasis& basis,
                             const InteractionMatrix& v, int n) {
    if (v.l != sol.l || v.size != basis.size() || sol.coefficients.size() != basis.size())
        throw std::invalid_argument("energy_shift_quotient: mismatched basis/interaction/solution sizes");
    if (n < 0 || n >= basis.size())
        throw std::out_of_range("energy_shift_quotient: reference index " + std::to_string(n) +
                                " outside [0, " + std::to_string(basis.size()) + ")");
    const double kn = sol.coefficients[n];
    if (std::abs(kn) < 1e-10)
        throw std::domain_error("energy_shift_quotient: coefficient K_" + std::to_string(n) +
                                " is numerically zero; pick an index with weight");
    return v.entries.row(n).dot(sol.coefficients) / kn;
}

BasisFactory shared_rule_factory(const TrapModel& trap, int l, int max_size) {
    if (max_size < 1)
        throw std::invalid_argument("shared_rule_factory: max_size must be >= 1");
    const int order = max_size + RadialBasis::default_margin;
    return [trap, l, order](int n) { return RadialBasis(trap, l, n, order); };
}

ConvergenceTable convergence_sweep(const BasisFactory& make_basis, const Potential& p,
                                   const std::vector<int>& sizes, int levels, double epsilon) {
    if (sizes.empty())
        throw std::invalid_argument("convergence_sweep: empty size ladder");
    for (size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("convergence_sweep: ladder must be strictly increasing");
    if (levels < 1 || levels > sizes.front())
        throw std::invalid_argument("convergence_sweep: levels must lie in [1, smallest rung]");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("convergence_sweep: epsilon must be positive");

    const int rungs = static_cast<int>(sizes.size());
    ConvergenceTable t;
    t.sizes = sizes;
    t.epsilon = epsilon;
    t.energies.resize(rungs, levels);
    t.deltas = Eigen::MatrixXd::Constant(rungs, levels, kNaN);

    for (int r = 0; r < rungs; ++r) {
        RadialBasis basis = make_basis(sizes[r]);
        InteractionMatrix v = matrix_elements(basis, p);
        const auto sols = find_levels(assemble(basis, v), levels);
        for (int k = 0; k < levels; ++k) t.energies(r, k) = sols[k].energy;
        if (r > 0)
            for (int k = 0; k < levels; ++k)
                t.deltas(r, k) = t.energies(r, k) - t.energies(r - 1, k);
    }

    t.converged.assign(levels, false);
    if (rungs >= 3) {
        for (int k = 0; k < levels; ++k)
            t.converged[k] = std::abs(t.deltas(rungs - 1, k)) < epsilon &&
                             std::abs(t.deltas(rungs - 2, k)) < epsilon;
    }
    return t;
}

} // namespace trapbose
