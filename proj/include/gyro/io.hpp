#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gyro/asymptotics.hpp"
#include "gyro/spectrum.hpp"

namespace gyro {

inline constexpr const char* kVersion = "0.1.0";

/// On-disk form of a system: n plus four row-major n^2 arrays and optional
/// metadata. Round-trips bit-exactly for finite doubles.
struct SystemFile {
    LagrangianSystem system;
    std::optional<std::string> name;
    std::optional<std::string> description;
};

SystemFile load_system_file(const std::string& path);
LagrangianSystem load_system(const std::string& path);
void save_system(const LagrangianSystem& sys, const std::string& path,
                 const std::optional<std::string>& name = std::nullopt,
                 const std::optional<std::string>& description = std::nullopt);
std::string system_to_json(const LagrangianSystem& sys, const std::optional<std::string>& name,
                           const std::optional<std::string>& description);

/// One row of the sweep table (header: beta,branch,re_zeta,im_zeta,q_factor,class).
struct SweepRow {
    double beta = 0;
    int branch = 0;
    double re_zeta = 0;
    double im_zeta = 0;
    double q_factor = 0;  // may be +inf
    ModeClass klass = ModeClass::Unclassified;
};

std::string write_sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::string& text);

/// Asymptote overlays for the plots, typically parsed back from the
/// `asymptotics` command's JSON output.
struct PlotOverlay {
    std::vector<double> b_coeffs;      // damping asymptotes b_j * beta
    std::vector<double> d_coeffs;      // damping asymptotes d_j / beta
    std::vector<double> dual_slopes;   // damping asymptotes s_j / beta
    std::vector<double> rho;           // frequency asymptotes (horizontal)
};

struct PlotMarkers {
    std::optional<double> beta0, beta1, beta2;
};

/// Static SVG: log beta axis, one polyline per branch, optional asymptote
/// overlays and vertical threshold markers. `which` selects
/// damping | frequency | q. Deterministic output; throws EmptyCsv on no rows.
std::string render_sweep_svg(const std::vector<SweepRow>& rows, const std::string& which,
                             const std::optional<PlotOverlay>& overlay,
                             const std::optional<PlotMarkers>& markers);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit content hash, hex encoded; report provenance.
std::string content_hash(const std::string& bytes);

}  // namespace gyro
