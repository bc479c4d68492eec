#include "creditcap/loss_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "creditcap/errors.hpp"

namespace creditcap {

namespace {

// Conditional default machinery shared by all three paths. Given a factor
// realisation S, obligor i defaults with probability
//   p_i(S) = Phi(t_norm_i - c_i . S),
// where t_norm_i = T_i / sqrt(1-rho_i^2) and c_i = rho_i w_i / sqrt(1-rho_i^2).
struct ConditionalModel {
    std::vector<double> t_norm;
    std::vector<double> c;  // row-major N x k
    std::size_t k = 1;
    bool uniform_params = true;  // all obligors share (t_norm, c)

    static ConditionalModel build(const Portfolio& p) {
        ConditionalModel m;
        const std::size_t n = p.size();
        m.k = p.factor_model.k;
        m.t_norm.resize(n);
        m.c.resize(n * m.k);
        for (std::size_t i = 0; i < n; ++i) {
            const Obligor& o = p.obligors[i];
            const double rho = o.sensitivity;
            if (!(std::fabs(rho) < 1.0))
                throw DomainError("loss_engine: |sensitivity| must be < 1 for obligor " + o.id);
            const double inv = 1.0 / std::sqrt(1.0 - rho * rho);
            m.t_norm[i] = threshold_from_ttc_pd(o.ttc_pd) * inv;
            for (std::size_t j = 0; j < m.k; ++j)
                m.c[i * m.k + j] = rho * inv * o.factor_weights[j];
        }
        for (std::size_t i = 1; i < n && m.uniform_params; ++i) {
            if (m.t_norm[i] != m.t_norm[0]) m.uniform_params = false;
            for (std::size_t j = 0; j < m.k; ++j)
                if (m.c[i * m.k + j] != m.c[j]) m.uniform_params = false;
        }
        return m;
    }

    double conditional_pd(std::size_t i, std::span<const double> s) const {
        double shift = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            shift += c[i * k + j] * s[j];
        return std_normal_cdf(t_norm[i] - shift);
    }

    void conditional_pds(std::span<const double> s, std::vector<double>& out) const {
        out.resize(t_norm.size());
        if (uniform_params) {
            const double p0 = conditional_pd(0, s);
            std::fill(out.begin(), out.end(), p0);
        } else {
            for (std::size_t i = 0; i < t_norm.size(); ++i)
                out[i] = conditional_pd(i, s);
        }
    }
};

// Loss support shared by the exact paths. Equal exposures live on the
// default-count lattice {0, u, .., Nu}; unequal exposures are rounded to
// integer multiples of the grid step and convolved there.
struct LossLattice {
    bool equal = true;
    double unit = 0.0;                // exposure u when equal
    double step = 0.0;                // grid step otherwise
    std::vector<std::size_t> units;   // per-obligor multiples, general path
    std::size_t total = 0;            // max lattice index

    static LossLattice build(const Portfolio& p, double grid_step) {
        LossLattice lat;
        lat.equal = p.equal_exposures();
        if (lat.equal) {
            lat.unit = p.obligors.front().exposure;
            lat.total = p.size();
            return lat;
        }
        if (!(grid_step > 0.0))
            throw DomainError("loss grid step must be > 0");
        lat.step = grid_step;
        lat.units.resize(p.size());
        lat.total = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            lat.units[i] =
                static_cast<std::size_t>(std::llround(p.obligors[i].exposure / grid_step));
            lat.total += lat.units[i];
        }
        return lat;
    }

    double level(std::size_t idx) const {
        return equal ? static_cast<double>(idx) * unit
                     : static_cast<double>(idx) * step;
    }
};

// Conditional loss pmf on the lattice for a given vector of conditional PDs.
std::vector<double> conditional_loss_pmf(const LossLattice& lat,
                                         std::span<const double> pds,
                                         bool pds_equal) {
    if (lat.equal) {
        if (pds_equal)
            return binomial_pmf_vector(pds.size(), pds[0]);
        return poisson_binomial_pmf(pds);
    }
    std::vector<double> pmf(lat.total + 1, 0.0);
    pmf[0] = 1.0;
    std::size_t reach = 0;
    for (std::size_t i = 0; i < pds.size(); ++i) {
        const std::size_t m = lat.units[i];
        const double p = pds[i];
        const double q = 1.0 - p;
        if (m == 0)
            continue;  // exposure below grid resolution: no loss contribution
        for (std::size_t j = reach + 1; j-- > 0;) {
            pmf[j + m] += pmf[j] * p;
            pmf[j] *= q;
        }
        reach += m;
    }
    return pmf;
}

void check_exact_path(const Portfolio& p) {
    if (p.size() == 0)
        throw DomainError("loss_engine: empty portfolio");
    if (p.size() > kPoissonBinomialMaxN)
        throw CapacityError("loss_engine: N = " + std::to_string(p.size()) +
                            " exceeds the exact-path cap of " +
                            std::to_string(kPoissonBinomialMaxN) +
                            "; use mc_loss_distribution");
}

LossDistribution finalize_exact(const LossLattice& lat, std::vector<double> probs,
                                DistributionSource source) {
    LossDistribution d;
    d.source = source;
    if (lat.equal) {
        d.loss_levels.resize(probs.size());
        for (std::size_t i = 0; i < probs.size(); ++i)
            d.loss_levels[i] = lat.level(i);
        d.probabilities = std::move(probs);
        return d;
    }
    // general path: keep the reachable (distinct) loss sums only
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] != 0.0) {
            d.loss_levels.push_back(lat.level(i));
            d.probabilities.push_back(probs[i]);
        }
    }
    return d;
}

}  // namespace

LossDistribution ttc_loss_distribution(const Portfolio& p, const QuadratureRule& rule,
                                       double grid_step) {
    if (p.factor_model.k != 1)
        throw UnsupportedModeError(
            "ttc_loss_distribution: deterministic integration is one-factor only "
            "(k = " + std::to_string(p.factor_model.k) + "); use mc_loss_distribution");
    check_exact_path(p);
    if (rule.nodes.size() < 2 || rule.nodes.size() != rule.weights.size())
        throw DomainError("ttc_loss_distribution: malformed quadrature rule");

    const ConditionalModel cm = ConditionalModel::build(p);
    const LossLattice lat = LossLattice::build(p, grid_step);
    const double sigma = std::sqrt(p.factor_model.cov(0, 0));

    std::vector<double> mixed(lat.total + 1, 0.0);
    std::vector<double> comp(lat.total + 1, 0.0);  // Neumaier per level
    std::vector<double> pds;
    for (std::size_t jn = 0; jn < rule.nodes.size(); ++jn) {
        const double s = sigma * rule.nodes[jn];
        cm.conditional_pds(std::span<const double>(&s, 1), pds);
        const std::vector<double> pmf =
            conditional_loss_pmf(lat, pds, cm.uniform_params);
        const double w = rule.weights[jn];
        for (std::size_t i = 0; i < pmf.size(); ++i) {
            const double term = w * pmf[i];
            const double t = mixed[i] + term;
            comp[i] += (std::fabs(mixed[i]) >= std::fabs(term))
                           ? (mixed[i] - t) + term
                           : (term - t) + mixed[i];
            mixed[i] = t;
        }
    }
    for (std::size_t i = 0; i < mixed.size(); ++i)
        mixed[i] += comp[i];
    return finalize_exact(lat, std::move(mixed), DistributionSource::Quadrature);
}

LossDistribution pit_loss_distribution(const Portfolio& p, const Scenario& sc,
                                       double grid_step) {
    if (sc.kind != ScenarioKind::Fixed)
        throw ConfigError("pit_loss_distribution: scenario must be of kind Fixed");
    if (sc.fixed_values.size() != p.factor_model.k)
        throw ConfigError("pit_loss_distribution: scenario dimension does not match k");
    check_exact_path(p);

    const ConditionalModel cm = ConditionalModel::build(p);
    const LossLattice lat = LossLattice::build(p, grid_step);
    std::vector<double> pds;
    cm.conditional_pds(sc.fixed_values, pds);
    std::vector<double> pmf = conditional_loss_pmf(lat, pds, cm.uniform_params);
    return finalize_exact(lat, std::move(pmf), DistributionSource::ConditionalExact);
}

namespace {

struct WorkerTally {
    std::vector<std::uint64_t> counts;              // equal-exposure path
    std::unordered_map<double, std::uint64_t> sums; // general path
};

struct McContext {
    const Portfolio* portfolio;
    const ConditionalModel* cm;
    const Scenario* scenario;
    const McConfig* cfg;
    std::vector<double> chol;        // k x k lower triangular
    std::vector<double> fixed_pds;   // Fixed scenario only
    bool equal_exposures;
};

bool in_box(std::span<const double> s, const std::vector<FactorInterval>& box) {
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s[j] < box[j].low || s[j] > box[j].high)
            return false;
    return true;
}

void draw_systematic(NormalSampler& rng, const McContext& ctx,
                     std::vector<double>& z, std::vector<double>& s) {
    const std::size_t k = ctx.portfolio->factor_model.k;
    for (std::size_t j = 0; j < k; ++j)
        z[j] = rng.next_normal();
    for (std::size_t j = 0; j < k; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m <= j; ++m)
            acc += ctx.chol[j * k + m] * z[m];
        s[j] = acc;
    }
}

void mc_worker(const McContext& ctx, unsigned worker, std::uint64_t n_paths,
               WorkerTally& tally) {
    const Portfolio& p = *ctx.portfolio;
    const ConditionalModel& cm = *ctx.cm;
    const std::size_t n = p.size();
    const std::size_t k = p.factor_model.k;
    const ScenarioKind kind = ctx.scenario->kind;
    const bool antithetic = ctx.cfg->antithetic;

    NormalSampler rng(ctx.cfg->seed, worker);
    std::vector<double> z(k), s(k), pds;
    std::vector<double> u(n);  // idiosyncratic uniforms, reused by the pair

    if (ctx.equal_exposures)
        tally.counts.assign(n + 1, 0);

    // 1e8 rejected proposals for a single draw means the pilot estimate was
    // a fluke; bail out rather than spin.
    constexpr std::uint64_t kMaxAttemptsPerDraw = 100'000'000;

    auto tally_loss = [&](bool flip) {
        const std::span<const double> pspan =
            (kind == ScenarioKind::Fixed) ? std::span<const double>(ctx.fixed_pds)
                                          : std::span<const double>(pds);
        if (ctx.equal_exposures) {
            std::size_t defaults = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ui = flip ? 1.0 - u[i] : u[i];
                defaults += (ui < pspan[i]);
            }
            ++tally.counts[defaults];
        } else {
            double loss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ui = flip ? 1.0 - u[i] : u[i];
                if (ui < pspan[i])
                    loss += p.obligors[i].exposure;
            }
            ++tally.sums[loss];
        }
    };

    std::uint64_t done = 0;
    while (done < n_paths) {
        if (kind == ScenarioKind::Unconditional) {
            draw_systematic(rng, ctx, z, s);
        } else if (kind == ScenarioKind::Truncated) {
            std::uint64_t attempts = 0;
            do {
                draw_systematic(rng, ctx, z, s);
                if (++attempts > kMaxAttemptsPerDraw)
                    throw InfeasibleScenarioError(
                        "mc_loss_distribution: truncation box still unreached after " +
                            std::to_string(attempts) + " proposals",
                        0.0);
            } while (!in_box(s, ctx.scenario->box));
        }
        if (kind != ScenarioKind::Fixed)
            cm.conditional_pds(s, pds);
        for (std::size_t i = 0; i < n; ++i)
            u[i] = rng.next_uniform();

        tally_loss(false);
        ++done;

        if (antithetic && done < n_paths) {
            // mirror the pair: reflected factors, reflected uniforms
            if (kind == ScenarioKind::Unconditional) {
                for (std::size_t j = 0; j < k; ++j)
                    s[j] = -s[j];
                cm.conditional_pds(s, pds);
            }
            tally_loss(true);
            ++done;
        }
    }
}

}  // namespace

LossDistribution mc_loss_distribution(const Portfolio& p, const Scenario& sc,
                                      const McConfig& cfg) {
    if (cfg.n_sims < 1)
        throw ConfigError("mc_loss_distribution: n_sims must be >= 1");
    if (p.size() == 0)
        throw DomainError("mc_loss_distribution: empty portfolio");
    const std::size_t k = p.factor_model.k;
    if (sc.kind == ScenarioKind::Fixed && sc.fixed_values.size() != k)
        throw ConfigError("mc_loss_distribution: scenario dimension does not match k");
    if (sc.kind == ScenarioKind::Truncated) {
        if (sc.box.size() != k)
            throw ConfigError("mc_loss_distribution: truncation box dimension does not match k");
        if (cfg.antithetic)
            throw ConfigError(
                "mc_loss_distribution: antithetic sampling is not defined for "
                "truncated scenarios (the reflected draw can leave the box)");
    }

    McContext ctx;
    ctx.portfolio = &p;
    const ConditionalModel cm = ConditionalModel::build(p);
    ctx.cm = &cm;
    ctx.scenario = &sc;
    ctx.cfg = &cfg;
    ctx.chol = p.factor_model.cholesky_factor();
    ctx.equal_exposures = p.equal_exposures();
    if (sc.kind == ScenarioKind::Fixed)
        cm.conditional_pds(sc.fixed_values, ctx.fixed_pds);

    if (sc.kind == ScenarioKind::Truncated) {
        // Pilot acceptance measurement on a dedicated substream; guards the
        // main run against boxes the factor distribution essentially never
        // reaches.
        NormalSampler rng(cfg.seed, 0xFFFFFFFFull);
        std::vector<double> z(k), s(k);
        constexpr std::uint64_t kPilot = 2'000'000;
        std::uint64_t accepted = 0, attempts = 0;
        for (; attempts < kPilot; ++attempts) {
            draw_systematic(rng, ctx, z, s);
            if (in_box(s, sc.box) && ++accepted >= 100)
                break;  // healthy box, no need to finish the pilot
        }
        const double rate = static_cast<double>(accepted) / static_cast<double>(attempts + 1);
        if (rate < 1e-6)
            throw InfeasibleScenarioError(
                "mc_loss_distribution: truncation box acceptance rate " +
                    std::to_string(rate) + " is below 1e-6",
                rate);
    }

    unsigned workers = cfg.n_workers ? cfg.n_workers
                                     : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, cfg.n_sims));

    std::vector<WorkerTally> tallies(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::uint64_t base = cfg.n_sims / workers;
    const std::uint64_t rem = cfg.n_sims % workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t n_paths = base + (w < rem ? 1 : 0);
        threads.emplace_back([&, w, n_paths] {
            try {
                mc_worker(ctx, w, n_paths, tallies[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads)
        t.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);

    // Merge in worker order; integer counts make the merge order-independent.
    LossDistribution d;
    d.source = DistributionSource::MonteCarlo;
    const double n = static_cast<double>(cfg.n_sims);
    if (ctx.equal_exposures) {
        const double unit = p.obligors.front().exposure;
        std::vector<std::uint64_t> counts(p.size() + 1, 0);
        for (const WorkerTally& t : tallies)
            for (std::size_t i = 0; i < counts.size(); ++i)
                counts[i] += t.counts.empty() ? 0 : t.counts[i];
        for (std::size_t i = 0; i < counts.size(); ++i) {
            d.loss_levels.push_back(static_cast<double>(i) * unit);
            d.probabilities.push_back(static_cast<double>(counts[i]) / n);
        }
    } else {
        std::map<double, std::uint64_t> merged;
        for (const WorkerTally& t : tallies)
            for (const auto& [loss, cnt] : t.sums)
                merged[loss] += cnt;
        for (const auto& [loss, cnt] : merged) {
            d.loss_levels.push_back(loss);
            d.probabilities.push_back(static_cast<double>(cnt) / n);
        }
    }
    d.mc_stderr.resize(d.probabilities.size());
    for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
        const double q = d.probabilities[i];
        d.mc_stderr[i] = std::sqrt(std::max(q * (1.0 - q), 0.0) / n);
    }
    return d;
}

}  // namespace creditcap
