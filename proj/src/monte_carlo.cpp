#include "fas/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fas/correlation.hpp"

namespace fas {

namespace {

constexpr double kZ95 = 1.959963984540054;

void check_rho(double rho, const char* what) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error(std::string(what) + ": correlation factor must lie in [0, 1)");
}

// h = sqrt(1-c^2) * (a + j b) * s + c * (z0r + j z0i), squared magnitude.
inline double mixed_power(double cr, double c, double s, double a, double b, double z0r,
                          double z0i) {
  const double hr = cr * (a * s) + c * z0r;
  const double hi = cr * (b * s) + c * z0i;
  return hr * hr + hi * hi;
}

struct MisoTrial {
  int n, m;
  double rho, cr, s;  // s scales a standard normal to Normal(0, sigma^2/2)
  std::vector<double> x0, y0;

  explicit MisoTrial(const MisoConfig& cfg)
      : n(cfg.n_antennas),
        m(cfg.m_ports),
        rho(cfg.rho),
        cr(std::sqrt(1.0 - cfg.rho * cfg.rho)),
        s(std::sqrt(0.5 * cfg.sigma2)),
        x0(cfg.n_antennas),
        y0(cfg.n_antennas) {}

  double max_gain(GaussianSource& g) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      double a, b;
      g.pair(a, b);
      x0[i] = a * s;
      y0[i] = b * s;
      best += x0[i] * x0[i] + y0[i] * y0[i];
    }
    for (int port = 1; port < m; ++port) {
      double xm = 0.0;
      for (int i = 0; i < n; ++i) {
        double a, b;
        g.pair(a, b);
        xm += mixed_power(cr, rho, s, a, b, x0[i], y0[i]);
      }
      if (xm > best) best = xm;
    }
    return best;
  }
};

struct DualTrial {
  int mr, mt;
  double r1, r2, r12, c1, c2, c12, s;

  explicit DualTrial(const DualConfig& cfg)
      : mr(cfg.m_r),
        mt(cfg.m_t),
        r1(cfg.rho1),
        r2(cfg.rho2),
        r12(cfg.rho1 * cfg.rho2),
        c1(std::sqrt(1.0 - cfg.rho1 * cfg.rho1)),
        c2(std::sqrt(1.0 - cfg.rho2 * cfg.rho2)),
        c12(std::sqrt(1.0 - cfg.rho1 * cfg.rho1 * cfg.rho2 * cfg.rho2)),
        s(std::sqrt(0.5 * cfg.sigma2)) {}

  double max_gain(GaussianSource& g) {
    double z0r, z0i;
    g.pair(z0r, z0i);
    z0r *= s;
    z0i *= s;
    double best = z0r * z0r + z0i * z0i;
    double a, b;
    for (int i = 1; i < mr; ++i) {
      g.pair(a, b);
      const double p = mixed_power(c1, r1, s, a, b, z0r, z0i);
      if (p > best) best = p;
    }
    for (int j = 1; j < mt; ++j) {
      g.pair(a, b);
      const double p = mixed_power(c2, r2, s, a, b, z0r, z0i);
      if (p > best) best = p;
    }
    for (int i = 1; i < mr; ++i)
      for (int j = 1; j < mt; ++j) {
        g.pair(a, b);
        const double p = mixed_power(c12, r12, s, a, b, z0r, z0i);
        if (p > best) best = p;
      }
    return best;
  }
};

struct RxSisoTrial {
  Eigen::VectorXd rho;  // Jakes coefficients, rho[0] = 1 (the reference port)
  Eigen::VectorXd cr;

  RxSisoTrial(int m_r, double w) : rho(jakes_coefficients(m_r, w)), cr(m_r) {
    for (int i = 0; i < m_r; ++i) cr[i] = std::sqrt(1.0 - rho[i] * rho[i]);
  }

  double max_gain(GaussianSource& g) {
    double z0r, z0i;
    g.pair(z0r, z0i);
    z0r *= 0.7071067811865476;  // sigma^2 = 1 on the normalized axis
    z0i *= 0.7071067811865476;
    double best = z0r * z0r + z0i * z0i;
    for (int i = 1; i < rho.size(); ++i) {
      double a, b;
      g.pair(a, b);
      const double p = mixed_power(cr[i], rho[i], 0.7071067811865476, a, b, z0r, z0i);
      if (p > best) best = p;
    }
    return best;
  }
};

// Chunked, order-independent trial runner. Each chunk replays a stream derived
// from (seed, chunk index); outage counts combine by integer summation.
template <class TrialFactory>
McEstimate run_chunked(std::uint64_t trials, std::uint64_t seed, const McOptions& opts,
                       double gain_threshold, TrialFactory make_trial) {
  if (trials < 1) throw std::domain_error("estimate_op: trials must be >= 1");
  const std::uint64_t chunk = opts.chunk_size > 0 ? opts.chunk_size : 1;
  const std::uint64_t n_chunks = (trials + chunk - 1) / chunk;
  std::vector<std::uint64_t> counts(n_chunks, 0);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&]() {
    auto trial = make_trial();
    for (;;) {
      const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      GaussianSource src(derive_stream_seed(seed, c));
      const std::uint64_t todo = std::min(chunk, trials - c * chunk);
      std::uint64_t hits = 0;
      for (std::uint64_t t = 0; t < todo; ++t)
        if (trial.max_gain(src) < gain_threshold) ++hits;
      counts[c] = hits;
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  std::uint64_t want = opts.n_threads > 0 ? std::uint64_t(opts.n_threads)
                                          : std::uint64_t(hw > 0 ? hw : 1);
  if (want > n_chunks) want = n_chunks;
  std::vector<std::thread> pool;
  for (std::uint64_t i = 1; i < want; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  for (std::uint64_t c : counts) est.outages += c;
  est.p_hat = double(est.outages) / double(trials);
  wilson_interval(est.outages, trials, est.ci95_low, est.ci95_high);
  return est;
}

}  // namespace

void MisoConfig::validate() const {
  if (n_antennas < 1) throw std::domain_error("MisoConfig: n_antennas must be >= 1");
  if (m_ports < 1) throw std::domain_error("MisoConfig: m_ports must be >= 1");
  check_rho(rho, "MisoConfig");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::domain_error("MisoConfig: sigma2 must be finite and > 0");
}

void DualConfig::validate() const {
  if (m_t < 1 || m_r < 1) throw std::domain_error("DualConfig: port counts must be >= 1");
  check_rho(rho1, "DualConfig rho1");
  check_rho(rho2, "DualConfig rho2");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::domain_error("DualConfig: sigma2 must be finite and > 0");
}

Threshold Threshold::linear(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::domain_error("Threshold: value must be finite and > 0");
  return Threshold(value);
}

Threshold Threshold::from_db(double db) {
  if (!std::isfinite(db)) throw std::domain_error("Threshold: dB value must be finite");
  return Threshold(std::pow(10.0, db / 10.0));
}

void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& low, double& high) {
  if (trials == 0) throw std::domain_error("wilson_interval: trials must be >= 1");
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  low = std::max(0.0, center - half);
  high = std::min(1.0, center + half);
}

Eigen::VectorXd sample_miso_gain(const MisoConfig& cfg, GaussianSource& draw) {
  cfg.validate();
  MisoTrial trial(cfg);
  Eigen::VectorXd gains(cfg.m_ports);
  double x1 = 0.0;
  for (int i = 0; i < trial.n; ++i) {
    double a, b;
    draw.pair(a, b);
    trial.x0[i] = a * trial.s;
    trial.y0[i] = b * trial.s;
    x1 += trial.x0[i] * trial.x0[i] + trial.y0[i] * trial.y0[i];
  }
  gains[0] = x1;
  for (int port = 1; port < trial.m; ++port) {
    double xm = 0.0;
    for (int i = 0; i < trial.n; ++i) {
      double a, b;
      draw.pair(a, b);
      xm += mixed_power(trial.cr, trial.rho, trial.s, a, b, trial.x0[i], trial.y0[i]);
    }
    gains[port] = xm;
  }
  return gains;
}

Eigen::MatrixXd sample_dual_gain(const DualConfig& cfg, GaussianSource& draw) {
  cfg.validate();
  DualTrial trial(cfg);
  Eigen::MatrixXd gains(cfg.m_r, cfg.m_t);
  double z0r, z0i;
  draw.pair(z0r, z0i);
  z0r *= trial.s;
  z0i *= trial.s;
  gains(0, 0) = z0r * z0r + z0i * z0i;
  double a, b;
  for (int i = 1; i < cfg.m_r; ++i) {
    draw.pair(a, b);
    gains(i, 0) = mixed_power(trial.c1, trial.r1, trial.s, a, b, z0r, z0i);
  }
  for (int j = 1; j < cfg.m_t; ++j) {
    draw.pair(a, b);
    gains(0, j) = mixed_power(trial.c2, trial.r2, trial.s, a, b, z0r, z0i);
  }
  for (int i = 1; i < cfg.m_r; ++i)
    for (int j = 1; j < cfg.m_t; ++j) {
      draw.pair(a, b);
      gains(i, j) = mixed_power(trial.c12, trial.r12, trial.s, a, b, z0r, z0i);
    }
  return gains;
}

McEstimate estimate_op_miso(const MisoConfig& cfg, Threshold th, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts) {
  cfg.validate();
  const double gain_th = th.value() * cfg.sigma2;  // outage: max X_m / sigma^2 < gamma_th
  return run_chunked(trials, seed, opts, gain_th, [&] { return MisoTrial(cfg); });
}

McEstimate estimate_op_dual(const DualConfig& cfg, Threshold th, std::uint64_t trials,
                            std::uint64_t seed, const McOptions& opts) {
  cfg.validate();
  const double gain_th = th.value() * cfg.sigma2;
  return run_chunked(trials, seed, opts, gain_th, [&] { return DualTrial(cfg); });
}

McEstimate estimate_op_rx_siso(int m_r, double w, Threshold th, std::uint64_t trials,
                               std::uint64_t seed, const McOptions& opts) {
  return run_chunked(trials, seed, opts, th.value(), [&] { return RxSisoTrial(m_r, w); });
}

}  // namespace fas
