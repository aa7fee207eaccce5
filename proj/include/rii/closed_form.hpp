#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rii/tridiagonal.hpp"

namespace rii {

/// Discrete measure and parameter streams behind the determinant solution of
/// the R_II chain. Weights are anchored at t = 0; later times enter only
/// through the shift and kappa products.
struct SpectralData {
  std::vector<double> roots;    // x_0..x_{N-1}
  std::vector<double> weights;  // c_0..c_{N-1}
  std::vector<double> shifts;   // s^{(0)}, s^{(1)}, ...
  std::vector<double> kappa;    // kappa_0, kappa_1, ... (must cover kappa_{t+n+1})
  std::vector<double> lambda;   // lambda_1..lambda_{N-1}

  std::size_t order() const noexcept { return roots.size(); }
};

/// m * 2^e with |m| in [0.5, 1) or m == 0. Hankel determinants of moderate
/// order leave the double range once kappa is large; they are carried in this
/// form and only their ratios are converted back.
struct ScaledReal {
  double m = 0.0;
  long e = 0;
};

ScaledReal scaled(double x);
ScaledReal operator*(ScaledReal a, ScaledReal b);
ScaledReal operator/(ScaledReal a, ScaledReal b);
ScaledReal operator+(ScaledReal a, ScaledReal b);
ScaledReal operator-(ScaledReal a, ScaledReal b);
/// Saturates to 0 or infinity outside the double range.
double to_double(ScaledReal x);

enum class TauMethod {
  PivotedLu,  // Gaussian elimination on the Hankel matrix of moments
  Expanded,   // sum over index subsets of weight products times squared Vandermondes
};

/// c_i = h K_{N-1}(x_i) L_{N-1}(x_i) / (phi_{N-1}(x_i) phi'_N(x_i)) with
/// h = H w_1 ... w_{N-1}. Throws DegenerateRoot when the denominator vanishes.
std::vector<double> rii_quadrature_weights(const RiiNormalForm& nf, std::span<const double> roots,
                                           double h_scale = 1.0);

/// Packs the normal form, its roots and the parameter streams. kappa_stream
/// continues the normal form's kappa_0..kappa_{N-2}.
SpectralData make_spectral_data(const RiiNormalForm& nf, std::vector<double> roots,
                                std::vector<double> shifts, std::span<const double> kappa_stream,
                                double h_scale = 1.0);

/// Weight of node i in the (k, l, t) family:
///   c_i prod_{j<t}(x_i - s^{(j)}) / (K_{t+k}(x_i) L_l(x_i)).
/// Throws PoleHit(i) when x_i meets a kappa or lambda.
std::vector<double> rii_node_weights(const SpectralData& sd, std::size_t k, std::size_t l,
                                     std::size_t t);

/// mu^{k,l,t}_m.
double rii_moment(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                  std::size_t m);

/// Determinant of the order x order Hankel matrix of sum_i rho_i x_i^{a+b}.
/// Returns 1 for order 0 and 0 for order > nodes.size().
double hankel_det(std::span<const double> nodes, std::span<const double> rho, long order,
                  TauMethod method);

/// tau^{k,l,t}_order; 0 for negative order.
double hankel_tau(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t, long order,
                  TauMethod method = TauMethod::PivotedLu);

ScaledReal rii_tau_scaled(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                          long order, TauMethod method = TauMethod::Expanded);

/// sigma^{k,l,t}_order = |mu^{k+1,l,t-1}_{a+b+1} - s^{(t)} mu^{k+1,l,t-1}_{a+b}|, t >= 1.
double rii_sigma(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t, long order,
                 TauMethod method = TauMethod::Expanded);

ScaledReal rii_sigma_scaled(const SpectralData& sd, std::size_t k, std::size_t l, std::size_t t,
                            long order, TauMethod method = TauMethod::Expanded);

/// Determinant expressions for the chain variables. Throw DegenerateTau on a
/// zero denominator.
double closed_form_q(const SpectralData& sd, std::size_t n, std::size_t t,
                     TauMethod method = TauMethod::Expanded);
double closed_form_e(const SpectralData& sd, std::size_t n, std::size_t t,
                     TauMethod method = TauMethod::Expanded);
/// Sweep value d^{(t)}_n of the step that produced time t (t >= 1).
double closed_form_d(const SpectralData& sd, std::size_t n, std::size_t t,
                     TauMethod method = TauMethod::Expanded);

struct TodaSpectralData {
  std::vector<double> roots;
  std::vector<double> weights;
  std::vector<double> shifts;

  std::size_t order() const noexcept { return roots.size(); }
};

/// c_i = h / (phi_{N-1}(x_i) phi'_N(x_i)), h = H w_1 ... w_{N-1}.
std::vector<double> toda_quadrature_weights(const BalancedMatrix& m, std::span<const double> roots,
                                            double h_scale = 1.0);

/// mu^{(t)}_m = sum_i c_i x_i^m prod_{j<t}(x_i - s^{(j)}).
double toda_moment(const TodaSpectralData& sd, std::size_t t, std::size_t m);

double toda_tau(const TodaSpectralData& sd, std::size_t t, long order,
                TauMethod method = TauMethod::Expanded);

/// |mu^{(t-1)}_{a+b+1} - s^{(t)} mu^{(t-1)}_{a+b}|, t >= 1.
double toda_sigma(const TodaSpectralData& sd, std::size_t t, long order,
                  TauMethod method = TauMethod::Expanded);

struct QePair {
  double q;
  double e;
};

QePair toda_closed_form(const TodaSpectralData& sd, std::size_t n, std::size_t t,
                        TauMethod method = TauMethod::Expanded);

/// d^{(t)}_n of the dqds sweep that produced time t (t >= 1).
double toda_closed_form_d(const TodaSpectralData& sd, std::size_t n, std::size_t t,
                          TauMethod method = TauMethod::Expanded);

}  // namespace rii
