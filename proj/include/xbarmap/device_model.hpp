#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace xbarmap {

// Fitting constants of the PCM cell model: JMA crystallization kinetics,
// quadratic self-heating and the exponential endurance law.
struct DevicePhysicsParams {
    double alpha_per_s = 1e7;      // crystallization rate constant [1/s]
    double t_melt_k = 888.0;       // GST melting temperature [K]
    double t_ambient_k = 300.0;    // ambient temperature [K]
    double k_heat_k_per_a2 = 9e10; // self-heating coefficient [K/A^2]
    double gamma_k = 1.45e4;       // endurance fitting parameter [K]
    double vc_target = 0.1;        // crystalline fraction left by a completed RESET

    void validate() const;
};

// Lumped resistive description of one crossbar. A programming current sees
// the enabled cell in series with one wire segment per parasitic element on
// its path; drivers sit on the west edge, column currents exit south.
struct CrossbarGeometry {
    std::size_t rows = 128; // wordlines
    std::size_t cols = 128; // bitlines
    double r_wire_ohm = 25.0;
    double r_cell_ohm = 10e3;
    double v_spike_v = 1.0;

    void validate() const;
};

struct CellCoordinate {
    std::size_t row = 0;
    std::size_t col = 0;

    bool operator==(const CellCoordinate &) const = default;
};

// Derived per-cell quantities. Within one crossbar a cell with higher
// programming current always has a shorter RESET and a lower endurance.
struct CellProfile {
    double i_prog_a = 0.0;
    double t_sh_k = 0.0;
    double prog_latency_s = 0.0;
    double endurance_cycles = 0.0;
};

// A cell whose programming current cannot heat it above ambient never
// amorphizes and cannot be programmed.
class UnprogrammableCellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Number of parasitic wire segments between a cell and its driver/sink
// corner; 0 at the bottom-left cell, rows+cols-2 at the top-right.
std::size_t path_length(const CrossbarGeometry &geom, CellCoordinate cell);

double programming_current(const CrossbarGeometry &geom, CellCoordinate cell);

double self_heating_temperature(
        double i_prog_a, const DevicePhysicsParams &phys);

// JMA crystalline fraction after `elapsed_s` seconds at temperature t_sh_k.
// Clamped to 1 at or below ambient: no amorphization without self-heating.
double crystalline_fraction(
        double t_sh_k, double elapsed_s, const DevicePhysicsParams &phys);

// Time for a RESET pulse to drive the crystalline fraction down to
// vc_target; inverse of crystalline_fraction in the time argument.
// Throws UnprogrammableCellError when t_sh_k <= t_ambient_k.
double programming_latency(double t_sh_k, const DevicePhysicsParams &phys);

double cell_endurance(double t_sh_k, const DevicePhysicsParams &phys);

CellProfile cell_profile(const CrossbarGeometry &geom,
        const DevicePhysicsParams &phys, CellCoordinate cell);

// Row-major rows x cols matrix of programming currents [A]. Entries of
// equal path length are identical.
std::vector<double> current_map(const CrossbarGeometry &geom);

void write_current_map_csv(std::ostream &out, const CrossbarGeometry &geom);

// Per-cell profiles for a whole crossbar. Profiles depend on the cell only
// through its path length, so one profile is computed per path class.
class CrossbarProfile {
public:
    CrossbarProfile(const CrossbarGeometry &geom,
            const DevicePhysicsParams &phys);

    const CrossbarGeometry &geometry() const { return geom_; }
    const CellProfile &at(CellCoordinate cell) const;
    const CellProfile &at_path(std::size_t path) const
    {
        return by_path_[path];
    }
    std::size_t max_path() const { return by_path_.size() - 1; }

private:
    CrossbarGeometry geom_;
    std::vector<CellProfile> by_path_;
};

} // namespace xbarmap
