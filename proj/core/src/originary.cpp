#include "csg/originary.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "csg/accumulate.hpp"
#include "csg/errors.hpp"
#include "csg/variation.hpp"

namespace csg {
namespace {

constexpr int kStreakTarget = 8;
constexpr double kGeometricMargin = 1e-6;

} // namespace

std::complex<double> gregarious_amplitude(const Couplings& c, int n) {
  return amplitude(c, n, 0, 0);
}

ProductState originary_measure(const Couplings& c, int n_max, double tol) {
  if (n_max < 1) throw ConfigError("originary_measure needs n_max >= 1");
  if (!(tol > 0.0)) throw ConfigError("originary_measure needs tol > 0");

  ProductState st;
  ClassifyOpts cheap;
  cheap.with_evidence = false;
  st.formal = classify(c, cheap).status != ExtensionStatus::Extends;

  int delta_streak = 0;
  int geometric_streak = 0;
  double worst_ratio = 0.0;
  double prev_qhat = -1.0;
  for (int i = 1; i <= n_max; ++i) {
    const std::complex<double> qhat = gregarious_amplitude(c, i);
    const std::complex<double> prev = st.value;
    st.value *= (1.0 - qhat);
    st.n_terms = i;
    st.last_delta = std::abs(st.value - prev);

    delta_streak = st.last_delta < tol ? delta_streak + 1 : 0;
    if (delta_streak >= kStreakTarget) {
      st.converged = true;
      break;
    }

    // Geometric route: with |qhat| shrinking by a ratio bounded away
    // from 1, the remaining factors perturb the product by at most
    // |value| * |qhat| * r / (1 - r).
    const double aq = std::abs(qhat);
    const double ratio = prev_qhat > 0.0 ? aq / prev_qhat : 0.0;
    if (prev_qhat >= 0.0 && ratio < 1.0 - kGeometricMargin) {
      ++geometric_streak;
      worst_ratio = geometric_streak == 1 ? ratio : std::max(worst_ratio, ratio);
    } else {
      geometric_streak = 0;
      worst_ratio = 0.0;
    }
    prev_qhat = aq;
    if (geometric_streak >= kStreakTarget) {
      const double tail_bound =
          std::abs(st.value) * aq * worst_ratio / (1.0 - worst_ratio);
      if (tail_bound < tol) {
        st.converged = true;
        break;
      }
    }
  }
  return st;
}

std::complex<double> stem_event_measure(const Couplings& c, int n_max,
                                        double tol) {
  return 1.0 - originary_measure(c, n_max, tol).value;
}

std::complex<double> originary_truncation(MeasureEngine& engine, int n) {
  const LevelCatalog& cat = engine.tree().level(n);
  auto measures = engine.level_measures(n);
  ComplexCompensatedSum sum;
  for (std::size_t i = 0; i < cat.count; ++i)
    if (is_originary(cat.node(i))) sum.add(measures[i]);
  return sum.value();
}

bool precluded(const ProductState& state, double tol) {
  return state.converged && std::abs(state.value) < tol;
}

nlohmann::json orig_json(const ProductState& state, double tol) {
  return nlohmann::json{
      {"value_re", state.value.real()}, {"value_im", state.value.imag()},
      {"n_terms", state.n_terms},       {"converged", state.converged},
      {"formal", state.formal},         {"precluded", precluded(state, tol)}};
}

} // namespace csg
