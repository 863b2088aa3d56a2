#include "haarvol/gp_driver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "haarvol/errors.hpp"

namespace haarvol {

HurstFunction HurstFunction::constant(double value) {
  return HurstFunction{[value](double) { return value; },
                       "const(" + std::to_string(value) + ")"};
}

HurstFunction HurstFunction::linear(double h0, double h1) {
  return HurstFunction{[h0, h1](double s) { return h0 + (h1 - h0) * s; },
                       "linear(" + std::to_string(h0) + "," + std::to_string(h1) + ")"};
}

GaussianPath generate_brownian(int level, RngStream& stream) {
  const DyadicGrid grid(level);  // enforces the resource limit
  GaussianPath path;
  path.grid = grid;
  path.kind = DriverKind::brownian_motion;
  path.hurst = 0.5;
  path.alpha = 0.49;  // W is Hoelder of every order below 1/2 only
  path.seed = stream.master_seed();
  path.values.resize(grid.size());
  path.values[0] = 0.0;
  const double step_sd = std::sqrt(grid.spacing());
  double acc = 0.0;
  for (std::size_t m = 1; m < path.values.size(); ++m) {
    acc += step_sd * stream.next_normal();
    path.values[m] = acc;
  }
  return path;
}

double mbm_covariance_scale(double x, double y) {
  const double log_gamma = 0.5 * (std::lgamma(2.0 * x + 1.0) + std::lgamma(2.0 * y + 1.0)) -
                           std::lgamma(x + y + 1.0);
  const double sines = std::sqrt(std::sin(M_PI * x) * std::sin(M_PI * y));
  return std::exp(log_gamma) * sines / (2.0 * std::sin(M_PI * (x + y) / 2.0));
}

namespace {

double fbm_cov(double t, double s, double two_h) {
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double mbm_cov(double t, double s, double ht, double hs) {
  const double h = ht + hs;
  return mbm_covariance_scale(ht, hs) *
         (std::pow(t, h) + std::pow(s, h) - std::pow(std::abs(t - s), h));
}

// --- dense Cholesky backend ------------------------------------------------

// Lower factors are cached by (level, H samples); ensembles regenerate the
// same covariance for every replica.
using CholKey = std::pair<int, std::vector<double>>;

const Eigen::MatrixXd& cholesky_factor(const CholKey& key, const Eigen::MatrixXd& cov,
                                       const std::string& context) {
  static std::mutex mutex;
  static std::map<CholKey, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("covariance factorization failed (" + context + ")");
  auto factor = std::make_unique<Eigen::MatrixXd>(llt.matrixL());
  const Eigen::MatrixXd& ref = *factor;
  cache.emplace(key, std::move(factor));
  return ref;
}

std::vector<double> cholesky_path(const Eigen::MatrixXd& cov, const CholKey& key,
                                  const std::string& context, RngStream& stream) {
  const Eigen::MatrixXd& lower = cholesky_factor(key, cov, context);
  const Eigen::Index n = lower.rows();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = stream.next_normal();
  Eigen::VectorXd x = lower.triangularView<Eigen::Lower>() * z;
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  values[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i) + 1] = x[i];
  return values;
}

// --- circulant embedding backend -------------------------------------------

// Unit-spaced fractional Gaussian noise autocovariance.
double fgn_autocov(std::int64_t k, double two_h) {
  const double ka = static_cast<double>(k < 0 ? -k : k);
  return 0.5 * (std::pow(ka + 1.0, two_h) - 2.0 * std::pow(ka, two_h) +
                std::pow(std::abs(ka - 1.0), two_h));
}

void fft_forward(std::vector<std::complex<double>>& data) {
  const int n = static_cast<int>(data.size());
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  for (int i = 0; i < n; ++i) {
    buf[i][0] = data[static_cast<std::size_t>(i)].real();
    buf[i][1] = data[static_cast<std::size_t>(i)].imag();
  }
  fftw_execute(plan);
  for (int i = 0; i < n; ++i)
    data[static_cast<std::size_t>(i)] = {buf[i][0], buf[i][1]};
  fftw_destroy_plan(plan);
  fftw_free(buf);
}

// Eigenvalues of the circulant embedding of the fGn covariance, length 2N.
// Cached per (n, H); replica loops reuse the same embedding.
const std::vector<double>& circulant_eigenvalues(std::size_t n, double hurst) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, double>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({n, hurst});
  if (it != cache.end()) return it->second;

  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> c(m);
  const double two_h = 2.0 * hurst;
  for (std::size_t k = 0; k <= n; ++k) c[k] = fgn_autocov(static_cast<std::int64_t>(k), two_h);
  for (std::size_t k = 1; k < n; ++k) c[m - k] = c[k];
  fft_forward(c);
  std::vector<double> eig(m);
  double max_eig = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    eig[k] = c[k].real();
    max_eig = std::max(max_eig, eig[k]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (eig[k] < -1e-9 * max_eig)
      throw FactorizationError("circulant embedding produced negative eigenvalues (H=" +
                               std::to_string(hurst) + ", n=" + std::to_string(n) + ")");
    if (eig[k] < 0.0) eig[k] = 0.0;
  }
  return cache.emplace(std::make_pair(n, hurst), std::move(eig)).first->second;
}

// Unit-spaced fGn of length n from a standard normal vector of length 2n
// (Davies-Harte construction; exact in distribution).
std::vector<double> fgn_from_noise(std::size_t n, double hurst,
                                   const std::vector<double>& noise) {
  const std::size_t m = 2 * n;
  const std::vector<double>& eig = circulant_eigenvalues(n, hurst);
  std::vector<std::complex<double>> y(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  y[0] = std::sqrt(eig[0] * inv_m) * noise[0];
  y[n] = std::sqrt(eig[n] * inv_m) * noise[1];
  for (std::size_t k = 1; k < n; ++k) {
    const double amp = std::sqrt(0.5 * eig[k] * inv_m);
    const std::complex<double> g(noise[2 * k], noise[2 * k + 1]);
    y[k] = amp * g;
    y[m - k] = amp * std::conj(g);
  }
  fft_forward(y);
  std::vector<double> fgn(n);
  for (std::size_t q = 0; q < n; ++q) fgn[q] = y[q].real();
  return fgn;
}

std::vector<double> circulant_fbm_values(double hurst, int level,
                                         const std::vector<double>& noise) {
  const std::size_t n = std::size_t{1} << level;
  const std::vector<double> fgn = fgn_from_noise(n, hurst, noise);
  const double scale = std::pow(std::ldexp(1.0, -level), hurst);
  std::vector<double> values(n + 1);
  values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    acc += fgn[q];
    values[q + 1] = scale * acc;
  }
  return values;
}

std::vector<double> draw_noise(std::size_t count, RngStream& stream) {
  std::vector<double> noise(count);
  for (double& v : noise) v = stream.next_normal();
  return noise;
}

}  // namespace

Eigen::MatrixXd fbm_covariance(double hurst, int level) {
  const DyadicGrid grid(level);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.num_cells());
  Eigen::MatrixXd cov(n, n);
  const double two_h = 2.0 * hurst;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = grid.point(static_cast<std::size_t>(i) + 1);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double s = grid.point(static_cast<std::size_t>(j) + 1);
      cov(i, j) = cov(j, i) = fbm_cov(t, s, two_h);
    }
  }
  return cov;
}

Eigen::MatrixXd mbm_covariance(const HurstFunction& hurst, int level) {
  const DyadicGrid grid(level);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.num_cells());
  std::vector<double> h(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = grid.point(static_cast<std::size_t>(i) + 1);
    h[static_cast<std::size_t>(i)] = hurst(s);
    if (!(h[static_cast<std::size_t>(i)] > 0.5 && h[static_cast<std::size_t>(i)] < 1.0))
      throw std::invalid_argument("generate_mbm: H(s) must lie in (1/2,1); H(" +
                                  std::to_string(s) + ")=" +
                                  std::to_string(h[static_cast<std::size_t>(i)]));
  }
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = grid.point(static_cast<std::size_t>(i) + 1);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double s = grid.point(static_cast<std::size_t>(j) + 1);
      cov(i, j) = cov(j, i) =
          mbm_cov(t, s, h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(j)]);
    }
  }
  return cov;
}

GaussianPath generate_fbm(double hurst, int level, RngStream& stream,
                          const DriverOptions& opts) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("generate_fbm: H must lie in (0,1); got H=" +
                                std::to_string(hurst));
  const DyadicGrid grid(level);

  GaussMethod method = opts.method;
  if (method == GaussMethod::automatic)
    method = (level <= kAutoCholeskyLevel) ? GaussMethod::cholesky : GaussMethod::circulant;
  if (method == GaussMethod::hurst_interp)
    throw std::invalid_argument("generate_fbm: hurst_interp applies to mBm only");
  if (method == GaussMethod::cholesky && level > kMaxCholeskyFbmLevel)
    throw ResourceLimitError("generate_fbm: dense Cholesky limited to level <= " +
                             std::to_string(kMaxCholeskyFbmLevel) + "; got level " +
                             std::to_string(level));

  GaussianPath path;
  path.grid = grid;
  path.kind = DriverKind::fractional_bm;
  path.hurst = hurst;
  path.alpha = hurst - opts.alpha_margin;
  path.seed = stream.master_seed();
  if (method == GaussMethod::cholesky) {
    path.values = cholesky_path(fbm_covariance(hurst, level), CholKey{level, {hurst}},
                                "fBm H=" + std::to_string(hurst) +
                                    " level=" + std::to_string(level),
                                stream);
  } else {
    const std::vector<double> noise = draw_noise((std::size_t{1} << (level + 1)), stream);
    path.values = circulant_fbm_values(hurst, level, noise);
  }
  return path;
}

GaussianPath generate_mbm(const HurstFunction& hurst, int level, RngStream& stream,
                          const DriverOptions& opts) {
  const DyadicGrid grid(level);
  std::vector<double> h_samples(grid.size());
  double h_min = 1.0, h_max = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double s = grid.point(m);
    const double h = hurst(s);
    if (!(h > 0.5 && h < 1.0))
      throw std::invalid_argument("generate_mbm: H(s) must lie in (1/2,1); H(" +
                                  std::to_string(s) + ")=" + std::to_string(h));
    h_samples[m] = h;
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  }

  GaussMethod method = opts.method;
  if (method == GaussMethod::automatic)
    method = (level <= kAutoCholeskyLevel) ? GaussMethod::cholesky : GaussMethod::hurst_interp;
  if (method == GaussMethod::circulant)
    throw std::invalid_argument("generate_mbm: circulant applies to fBm only");
  if (method == GaussMethod::cholesky && level > kMaxCholeskyMbmLevel)
    throw ResourceLimitError("generate_mbm: dense Cholesky limited to level <= " +
                             std::to_string(kMaxCholeskyMbmLevel) + "; got level " +
                             std::to_string(level));

  GaussianPath path;
  path.grid = grid;
  path.kind = DriverKind::multifractional_bm;
  path.hurst_samples = h_samples;
  path.alpha = h_min - opts.alpha_margin;
  path.seed = stream.master_seed();

  if (method == GaussMethod::cholesky) {
    std::vector<double> key_h(h_samples.begin() + 1, h_samples.end());
    path.values = cholesky_path(mbm_covariance(hurst, level), CholKey{level, std::move(key_h)},
                                "mBm " + hurst.label + " level=" + std::to_string(level),
                                stream);
    return path;
  }

  // Interpolated-fBm construction: simulate an fBm family on an H-grid from
  // one shared noise draw, then blend per point with a quadratic Lagrange
  // stencil at H(t). Local roughness matches H(t); cross-covariances are
  // approximate at O(spacing^3).
  const std::vector<double> noise = draw_noise((std::size_t{1} << (level + 1)), stream);
  if (h_max - h_min < 1e-12) {
    path.values = circulant_fbm_values(h_min, level, noise);
    return path;
  }

  const double span = h_max - h_min;
  const int nodes =
      std::max(3, static_cast<int>(std::ceil(span / opts.hurst_interp_spacing)) + 1);
  std::vector<double> node_h(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i)
    node_h[static_cast<std::size_t>(i)] = h_min + span * i / (nodes - 1);

  // Per-point stencil start and Lagrange weights.
  const std::size_t npts = grid.size();
  std::vector<int> start(npts);
  std::vector<double> w0(npts), w1(npts), w2(npts);
  const double dh = span / (nodes - 1);
  for (std::size_t m = 0; m < npts; ++m) {
    const double h = h_samples[m];
    int i = static_cast<int>(std::floor((h - h_min) / dh - 0.5));
    i = std::clamp(i, 0, nodes - 3);
    start[m] = i;
    const double x0 = node_h[static_cast<std::size_t>(i)];
    const double x1 = node_h[static_cast<std::size_t>(i) + 1];
    const double x2 = node_h[static_cast<std::size_t>(i) + 2];
    w0[m] = (h - x1) * (h - x2) / ((x0 - x1) * (x0 - x2));
    w1[m] = (h - x0) * (h - x2) / ((x1 - x0) * (x1 - x2));
    w2[m] = (h - x0) * (h - x1) / ((x2 - x0) * (x2 - x1));
  }

  path.values.assign(npts, 0.0);
  for (int i = 0; i < nodes; ++i) {
    const std::vector<double> member =
        circulant_fbm_values(node_h[static_cast<std::size_t>(i)], level, noise);
    for (std::size_t m = 0; m < npts; ++m) {
      if (start[m] == i)
        path.values[m] += w0[m] * member[m];
      else if (start[m] + 1 == i)
        path.values[m] += w1[m] * member[m];
      else if (start[m] + 2 == i)
        path.values[m] += w2[m] * member[m];
    }
  }
  path.values[0] = 0.0;
  return path;
}

}  // namespace haarvol
