#include "csg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "csg/accumulate.hpp"
#include "csg/complex_literal.hpp"
#include "csg/errors.hpp"
#include "csg/parallel.hpp"

namespace csg {
namespace {

using cplx = std::complex<double>;

// zeta >= 0 is a theorem; negatives in (kZetaErrorFloor, 0) are
// floating noise around saturation and clamp to zero, anything below
// the floor indicates a bug.
constexpr double kZetaErrorFloor = -1e-9;

double clamp_zeta(double z) {
  if (z >= 0.0) return z;
  if (z <= kZetaErrorFloor)
    throw InternalConsistencyError(
        "zeta = " + format_double(z) +
        " below the error floor; colinearity defect must be non-negative");
  return 0.0;
}

double zeta_of_ideals(const LambdaTable& table, int n,
                      std::span<const Ideal> ideals) {
  const double denom = std::abs(table.stage_denominator(n));
  CompensatedSum sum;
  for (const Ideal& p : ideals) sum.add(table.abs(p.varpi, p.maximal_count));
  return clamp_zeta(sum.value() / denom - 1.0);
}

} // namespace

Event make_event(int level, std::vector<std::uint32_t> members,
                 std::size_t level_count) {
  if (level < 1) throw ConfigError("event level must be >= 1");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.back() >= level_count)
    throw ConfigError("event member " + std::to_string(members.back()) +
                      " out of range for level with " +
                      std::to_string(level_count) + " nodes");
  return Event{level, std::move(members)};
}

double node_zeta(const LabelledCauset& c, const Couplings& couplings) {
  const int n = c.size();
  LambdaTable table = LambdaTable::build(couplings, n);
  auto ideals = order_ideals(c);
  return zeta_of_ideals(table, n, ideals);
}

MeasureEngine::MeasureEngine(GrowthTree& tree, Couplings couplings,
                             int threads)
    : tree_(tree), couplings_(std::move(couplings)),
      threads_(resolve_threads(threads)),
      table_(LambdaTable::build(couplings_, 1)) {}

void MeasureEngine::set_threads(int threads) {
  threads_ = resolve_threads(threads);
}

const LambdaTable& MeasureEngine::lambda_table(int n) {
  if (table_.max_level() < n) table_ = LambdaTable::build(couplings_, n);
  return table_;
}

std::span<const std::complex<double>> MeasureEngine::level_measures(int n) {
  if (n < 1) throw ConfigError("levels are numbered from 1");
  while (static_cast<int>(measures_.size()) < n) {
    const int next = static_cast<int>(measures_.size()) + 1;
    const LevelCatalog& cat = tree_.level(next);
    std::vector<cplx> row(cat.count);
    if (next == 1) {
      row[0] = {1.0, 0.0}; // empty product at the root
    } else {
      const LambdaTable& table = lambda_table(next - 1);
      const auto& prev = measures_[static_cast<std::size_t>(next - 2)];
      // Child measure = parent measure x transition amplitude; the
      // denominator check reports the failing stage.
      const cplx denom = table.stage_denominator(next - 1);
      parallel_chunks(cat.count, threads_,
                      [&](std::size_t, std::size_t lo, std::size_t hi) {
                        for (std::size_t i = lo; i < hi; ++i)
                          row[i] = prev[cat.parent[i]] *
                                   (table.value(cat.varpi[i],
                                                cat.maximal_count[i]) /
                                    denom);
                      });
    }
    measures_.push_back(std::move(row));
  }
  return measures_[static_cast<std::size_t>(n - 1)];
}

std::complex<double> MeasureEngine::node_measure(int n, std::size_t index) {
  auto row = level_measures(n);
  if (index >= row.size())
    throw ConfigError("node index " + std::to_string(index) +
                      " out of range at level " + std::to_string(n));
  return row[index];
}

std::complex<double> MeasureEngine::event_measure(const Event& e) {
  auto row = level_measures(e.level);
  if (!e.members.empty() && e.members.back() >= row.size())
    throw ConfigError("event member out of range at level " +
                      std::to_string(e.level));
  ComplexCompensatedSum sum;
  for (std::uint32_t i : e.members) sum.add(row[i]);
  return sum.value();
}

ZetaRow MeasureEngine::level_zeta(int n) {
  const LevelCatalog& cat = tree_.level(n);
  const LambdaTable& table = lambda_table(n);
  // stage_denominator both validates and pins the failing stage
  (void)table.stage_denominator(n);

  ZetaRow row;
  row.level = n;
  row.zeta.resize(cat.count);
  parallel_chunks(cat.count, threads_,
                  [&](std::size_t, std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i) {
                      auto ideals = order_ideals(cat.node(i));
                      row.zeta[i] = zeta_of_ideals(table, n, ideals);
                    }
                  });

  row.argmax = 0;
  row.argmin = 0;
  for (std::size_t i = 1; i < row.zeta.size(); ++i) {
    if (row.zeta[i] > row.zeta[row.argmax]) row.argmax = i;
    if (row.zeta[i] < row.zeta[row.argmin]) row.argmin = i;
  }
  row.zeta_max = row.zeta[row.argmax];
  row.zeta_min = row.zeta[row.argmin];

  auto measures = level_measures(n);
  CompensatedSum s;
  for (const cplx& m : measures) s.add(std::abs(m));
  row.s_n = s.value();
  if (row.s_n < 1.0 - 1e-9)
    throw InternalConsistencyError("S_n = " + format_double(row.s_n) +
                                   " fell below 1");
  return row;
}

std::vector<double> MeasureEngine::s_n_series(int n_max) {
  if (n_max < 1) throw ConfigError("s_n_series needs n_max >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    auto measures = level_measures(n);
    CompensatedSum s;
    for (const cplx& m : measures) s.add(std::abs(m));
    out.push_back(s.value());
  }
  return out;
}

void write_zeta_csv(MeasureEngine& engine, int n_max, std::ostream& os) {
  if (n_max < 1) throw ConfigError("zeta report needs n_max >= 1");
  os << "n,node_index,iso_key,zeta,abs_measure,re_measure,im_measure\n";
  for (int n = 1; n <= n_max; ++n) {
    ZetaRow row = engine.level_zeta(n);
    const LevelCatalog& cat = engine.tree().level(n);
    auto measures = engine.level_measures(n);
    for (std::size_t i = 0; i < cat.count; ++i) {
      os << n << ',' << i << ',' << cat.iso_key[i].hex() << ','
         << format_double(row.zeta[i]) << ','
         << format_double(std::abs(measures[i])) << ','
         << format_double(measures[i].real()) << ','
         << format_double(measures[i].imag()) << '\n';
    }
  }
}

nlohmann::json zeta_summary_json(MeasureEngine& engine, int n_max) {
  if (n_max < 1) throw ConfigError("zeta report needs n_max >= 1");
  auto levels = nlohmann::json::array();
  for (int n = 1; n <= n_max; ++n) {
    ZetaRow row = engine.level_zeta(n);
    const LevelCatalog& cat = engine.tree().level(n);
    const double tol = 1e-12 * std::max(1.0, std::abs(row.zeta_max));
    const bool argmax_antichain =
        std::abs(row.zeta[cat.antichain_index()] - row.zeta_max) <= tol;
    const bool argmin_chain =
        std::abs(row.zeta[cat.chain_index()] - row.zeta_min) <= tol;
    levels.push_back({{"n", n},
                      {"zeta_max", row.zeta_max},
                      {"zeta_min", row.zeta_min},
                      {"argmax_is_antichain", argmax_antichain},
                      {"argmin_is_chain", argmin_chain},
                      {"s_n", row.s_n}});
  }
  return nlohmann::json{{"levels", levels}};
}

} // namespace csg
