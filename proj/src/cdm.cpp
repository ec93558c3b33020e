#include "emvac/cdm.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace emvac {

void CdmParams::validate() const {
    if (!(rho > 0.0)) throw ConfigError("CdmParams: rho must be > 0");
    if (!(xi > 0.0)) throw ConfigError("CdmParams: xi must be > 0");
    if (n_dipoles < 1) throw ConfigError("CdmParams: n_dipoles must be >= 1");
    if (alpha_tilde == cdouble(0.0, 0.0))
        throw ConfigError("CdmParams: alpha_tilde must be nonzero");
    if (!(k > 0.0)) throw ConfigError("CdmParams: k must be > 0");
    const double packing = rho * (4.0 * pi / 3.0) * 0.125 * xi * xi * xi;
    if (!(packing < 0.3))
        throw ConfigError("CdmParams: packing fraction " +
                          std::to_string(packing) +
                          " too high for random sequential addition");
}

double CdmParams::box_side() const { return std::cbrt(n_dipoles / rho); }

namespace {

// bit-stable uniform double in [0, 1)
inline double uniform01(std::mt19937_64& gen) {
    return double(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

DipoleConfiguration generate_configuration(const CdmParams& p,
                                           std::uint64_t seed) {
    p.validate();
    const double L = p.box_side();
    const double xi2 = p.xi * p.xi;

    DipoleConfiguration cfg;
    cfg.xi = p.xi;
    cfg.box_side = L;
    cfg.seed = seed;
    cfg.emitter_index = 0;
    cfg.positions.reserve(p.n_dipoles);
    cfg.positions.emplace_back(0.5 * L, 0.5 * L, 0.5 * L);

    // cell list with cells no smaller than xi
    const int nc = std::max(1, int(std::floor(L / p.xi)));
    const double cell = L / nc;
    std::vector<std::vector<int>> cells(std::size_t(nc) * nc * nc);
    auto cell_of = [&](const Eigen::Vector3d& r) {
        int ix = std::min(nc - 1, int(r.x() / cell));
        int iy = std::min(nc - 1, int(r.y() / cell));
        int iz = std::min(nc - 1, int(r.z() / cell));
        return (ix * nc + iy) * nc + iz;
    };
    auto overlaps = [&](const Eigen::Vector3d& r) {
        const int ix = std::min(nc - 1, int(r.x() / cell));
        const int iy = std::min(nc - 1, int(r.y() / cell));
        const int iz = std::min(nc - 1, int(r.z() / cell));
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    const int jx = ix + dx, jy = iy + dy, jz = iz + dz;
                    if (jx < 0 || jy < 0 || jz < 0 || jx >= nc || jy >= nc ||
                        jz >= nc)
                        continue;
                    for (int idx : cells[(jx * nc + jy) * nc + jz])
                        if ((cfg.positions[idx] - r).squaredNorm() < xi2)
                            return true;
                }
        return false;
    };
    cells[cell_of(cfg.positions[0])].push_back(0);

    std::mt19937_64 gen(seed);
    long budget = 1'000'000;
    while (int(cfg.positions.size()) < p.n_dipoles) {
        if (--budget < 0)
            throw NumericError(
                "generate_configuration: rejection budget exhausted at " +
                std::to_string(cfg.positions.size()) + " dipoles");
        const double x = uniform01(gen) * L;
        const double y = uniform01(gen) * L;
        const double z = uniform01(gen) * L;
        const Eigen::Vector3d r(x, y, z);
        if (overlaps(r)) continue;
        cfg.positions.push_back(r);
        cells[cell_of(r)].push_back(int(cfg.positions.size()) - 1);
    }
    return cfg;
}

namespace {

Eigen::MatrixXcd assemble_system(const DipoleConfiguration& cfg,
                                 cdouble alpha_tilde, double k) {
    const int n = int(cfg.positions.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    const cdouble inv_alpha = 1.0 / alpha_tilde;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) A(3 * i + c, 3 * i + c) = inv_alpha;
    const double k2 = k * k;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Matrix3cd g =
                k2 * g0_realspace(cfg.positions[i] - cfg.positions[j], k);
            // G0 is even in r and symmetric, so both blocks coincide
            A.block<3, 3>(3 * i, 3 * j) = g;
            A.block<3, 3>(3 * j, 3 * i) = g;
        }
    return A;
}

}  // namespace

CdmSolution solve_coupled_dipoles(const DipoleConfiguration& cfg,
                                  cdouble alpha_tilde, double k,
                                  const Eigen::Vector3cd& E0) {
    if (cfg.positions.empty())
        throw ConfigError("solve_coupled_dipoles: empty configuration");
    if (alpha_tilde == cdouble(0.0, 0.0))
        throw ConfigError("solve_coupled_dipoles: alpha_tilde must be nonzero");
    const int n = int(cfg.positions.size());
    const Eigen::MatrixXcd A = assemble_system(cfg, alpha_tilde, k);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(3 * n);
    b.segment<3>(3 * cfg.emitter_index) = E0;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rc = lu.rcond();
    if (rc < 1e-12)
        throw NumericError("solve_coupled_dipoles: resonant cluster, rcond = " +
                           std::to_string(rc));
    const Eigen::VectorXcd x = lu.solve(b);
    const double resid = (A * x - b).norm() / b.norm();
    if (!(resid < 1e-10))
        throw NumericError("solve_coupled_dipoles: residual " +
                           std::to_string(resid));

    CdmSolution out;
    out.residual = resid;
    out.rcond = rc;
    out.moments.resize(n);
    for (int i = 0; i < n; ++i) out.moments[i] = x.segment<3>(3 * i);
    return out;
}

Eigen::Matrix3cd self_propagator_scattering(const DipoleConfiguration& cfg,
                                            cdouble alpha_tilde, double k) {
    if (cfg.positions.empty())
        throw ConfigError("self_propagator_scattering: empty configuration");
    const int n = int(cfg.positions.size());
    const int e = cfg.emitter_index;
    const Eigen::MatrixXcd A = assemble_system(cfg, alpha_tilde, k);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rc = lu.rcond();
    if (rc < 1e-12)
        throw NumericError(
            "self_propagator_scattering: resonant cluster, rcond = " +
            std::to_string(rc));

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(3 * n, 3);
    for (int c = 0; c < 3; ++c) B(3 * e + c, c) = 1.0;
    const Eigen::MatrixXcd X = lu.solve(B);
    for (int c = 0; c < 3; ++c) {
        const double resid =
            (A * X.col(c) - B.col(c)).norm() / B.col(c).norm();
        if (!(resid < 1e-10))
            throw NumericError("self_propagator_scattering: residual " +
                               std::to_string(resid));
    }

    Eigen::Matrix3cd g_sc = Eigen::Matrix3cd::Zero();
    for (int c = 0; c < 3; ++c) {
        Eigen::Vector3cd acc = Eigen::Vector3cd::Zero();
        for (int i = 0; i < n; ++i) {
            if (i == e) continue;
            const Eigen::Matrix3cd g =
                g0_realspace(cfg.positions[e] - cfg.positions[i], k);
            acc += g * X.col(c).segment<3>(3 * i);
        }
        g_sc.col(c) = acc / alpha_tilde;
    }
    return g_sc;
}

EnsembleEstimate ensemble_average(const CdmParams& p, int n_configs,
                                  std::uint64_t base_seed, int parallelism) {
    p.validate();
    if (n_configs < 1)
        throw ConfigError("ensemble_average: n_configs must be >= 1");
    if (parallelism < 1) parallelism = 1;

    struct Slot {
        Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
        bool ok = false;
        bool passive = true;
        std::string error;
    };
    std::vector<Slot> slots(n_configs);

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int idx = next.fetch_add(1);
            if (idx >= n_configs) return;
            Slot& s = slots[idx];
            try {
                const DipoleConfiguration cfg =
                    generate_configuration(p, base_seed + std::uint64_t(idx));
                s.g = self_propagator_scattering(cfg, p.alpha_tilde, p.k);
                // extinction of the emitter must be non-negative: for a unit
                // drive along c, p0 = alpha (1 - k^2 alpha g_sc) e_c, and
                // Im{E0* . p0} >= 0
                for (int c = 0; c < 3; ++c) {
                    const cdouble p0 =
                        p.alpha_tilde *
                        (1.0 - p.k * p.k * p.alpha_tilde * s.g(c, c));
                    if (std::imag(p0) < -1e-12 * std::abs(p.alpha_tilde))
                        s.passive = false;
                }
                s.ok = true;
            } catch (const Error& e) {
                s.error = e.what();
            }
        }
    };
    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(parallelism);
        for (int t = 0; t < parallelism; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    EnsembleEstimate out;
    out.params = p;
    out.n_requested = n_configs;
    out.n_dipoles = p.n_dipoles;
    out.k = p.k;
    out.base_seed = base_seed;

    // index-ordered reduction: bitwise independent of worker count
    for (int i = 0; i < n_configs; ++i) {
        if (!slots[i].ok) {
            out.failed_indices.push_back(i);
            continue;
        }
        out.mean += slots[i].g;
        out.all_passive = out.all_passive && slots[i].passive;
        ++out.n_configs;
    }
    if (out.n_configs == 0)
        throw ValidationError("ensemble_average: every configuration failed");
    if (double(out.failed_indices.size()) > 0.05 * n_configs)
        throw ValidationError(
            "ensemble_average: " + std::to_string(out.failed_indices.size()) +
            " of " + std::to_string(n_configs) + " configurations failed");
    out.mean /= double(out.n_configs);

    if (out.n_configs > 1) {
        Eigen::Matrix3d var = Eigen::Matrix3d::Zero();
        for (int i = 0; i < n_configs; ++i) {
            if (!slots[i].ok) continue;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    var(r, c) += std::norm(slots[i].g(r, c) - out.mean(r, c));
        }
        var /= double(out.n_configs - 1);
        out.stderr_abs =
            (var / double(out.n_configs)).array().sqrt().matrix();
    }
    return out;
}

ValidationReport validate_against_analytic(const EnsembleEstimate& est,
                                           const PhiFactors& phi,
                                           const MaxwellGarnettMedium& medium,
                                           double rel_tol) {
    const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    if (!close(est.k, phi.k))
        throw ConfigError("validate_against_analytic: wavenumber mismatch");
    if (!close(est.params.rho, medium.rho) ||
        !close(est.params.xi, medium.xi) ||
        std::abs(est.params.alpha_tilde - medium.alpha_tilde) >
            1e-12 * std::max(1.0, std::abs(medium.alpha_tilde)))
        throw ConfigError(
            "validate_against_analytic: ensemble and medium parameters differ; "
            "comparison invalid");

    ValidationReport out;
    out.rel_tol = rel_tol;
    out.trace_ref = phi.sum_sc() / 3.0;
    out.trace_mean = est.mean.trace() / 3.0;
    out.trace_dev = std::abs(out.trace_mean - out.trace_ref);

    double var_tr = 0.0;
    for (int c = 0; c < 3; ++c)
        var_tr += est.stderr_abs(c, c) * est.stderr_abs(c, c);
    out.stderr_trace = std::sqrt(var_tr) / 3.0;

    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const cdouble ref =
                (r == c) ? out.trace_ref : cdouble(0.0, 0.0);
            const double se = est.stderr_abs(r, c);
            out.z_scores(r, c) =
                se > 0.0 ? std::abs(est.mean(r, c) - ref) / se : 0.0;
        }

    out.pass = out.trace_dev <=
               std::max(rel_tol * std::abs(out.trace_ref),
                        3.0 * out.stderr_trace);
    return out;
}

}  // namespace emvac
