#ifndef REPDAY_TOOLS_SVG_PLOT_HPP
#define REPDAY_TOOLS_SVG_PLOT_HPP

#include <string>

#include "repday/pipeline.hpp"

namespace repday::svgplot {

/// Grouped bar chart of the five design variables, representative design next
/// to the reference design when one is present. Byte-deterministic.
std::string design_chart(const pipeline::RunReport& report);

/// Line chart over grid fractions: total cost on the left axis, capex/opex
/// shares on the right axis. Byte-deterministic.
std::string sweep_chart(const pipeline::SweepResult& sweep);

/// Grouped bar chart per cluster count: period-level cost without extreme
/// days vs full-year cost with them, with the reference cost as a rule.
/// Byte-deterministic.
std::string compare_chart(const pipeline::ClusterCountReport& report);

}  // namespace repday::svgplot

#endif  // REPDAY_TOOLS_SVG_PLOT_HPP
