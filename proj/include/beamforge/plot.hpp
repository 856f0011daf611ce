#ifndef BEAMFORGE_PLOT_HPP
#define BEAMFORGE_PLOT_HPP

#include <string>

namespace beamforge {

enum class PlotKind { kLoss, kSweep };

PlotKind plot_kind_from_name(const std::string& name);

// Renders a training-log or sweep-report CSV into a standalone SVG line
// chart. Output bytes are deterministic for identical inputs.
void render_plot(const std::string& csv_path, PlotKind kind,
                 const std::string& svg_path);

}  // namespace beamforge

#endif
