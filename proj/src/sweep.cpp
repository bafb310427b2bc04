#include "singerkit/sweep.hpp"

#include <cmath>

#include "singerkit/dynamics.hpp"
#include "singerkit/scan.hpp"

namespace singerkit {

std::vector<double> sweep_values(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("sweep: step must be positive");
  if (!(start <= stop)) throw ConfigError("sweep: start must not exceed stop");
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw ConfigError("sweep: range must be finite");

  const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k)
    out[static_cast<std::size_t>(k)] = start + static_cast<double>(k) * step;
  out.front() = start;
  return out;
}

MapSpec bind_param(const MapSpec& base, const std::string& name, double value) {
  MapSpec m = base;
  for (auto& [pname, pvalue] : m.params)
    if (pname == name) {
      pvalue = value;
      return m;
    }
  throw ConfigError("sweep: map has no parameter named '" + name + "'");
}

std::vector<BifurcationRow> bifurcation_scan(const MapSpec& base, const std::string& param,
                                             const std::vector<double>& values, double x0,
                                             long transient, int window, const Settings& st,
                                             Exec exec) {
  if (transient < 1 || window < 1)
    throw ConfigError("bifurcation_scan: transient and window must be positive");
  bind_param(base, param, 0.0);  // validate the name before the parallel region

  return map_indices<BifurcationRow>(exec, values.size(), [&](std::size_t i) {
    const MapSpec m = bind_param(base, param, values[i]);
    const OmegaLimit lim = omega_limit(m, x0, transient, window, st);
    BifurcationRow row;
    row.param = values[i];
    row.clusters = lim.clusters;
    row.escaped = lim.escaped;
    return row;
  });
}

std::optional<double> cluster_transition(const std::vector<BifurcationRow>& rows, int have,
                                         int want) {
  std::ptrdiff_t hit = -1;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].escaped) continue;
    if (static_cast<int>(rows[j].clusters.size()) >= want) {
      hit = static_cast<std::ptrdiff_t>(j);
      break;
    }
  }
  if (hit < 0) return std::nullopt;
  for (std::ptrdiff_t i = hit - 1; i >= 0; --i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (r.escaped) continue;
    if (static_cast<int>(r.clusters.size()) <= have)
      return 0.5 * (r.param + rows[static_cast<std::size_t>(hit)].param);
  }
  return std::nullopt;
}

}  // namespace singerkit
