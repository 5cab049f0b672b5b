#pragma once

#include <Eigen/Dense>

namespace pemfc {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// State component order of the six-state air-supply model:
// compressor speed, supply-manifold pressure and mass, cathode oxygen and
// nitrogen masses, return-manifold pressure.
enum StateIndex : int {
    ix_omega_cp = 0,
    ix_p_sm = 1,
    ix_m_sm = 2,
    ix_m_o2 = 3,
    ix_m_n2 = 4,
    ix_p_rm = 5,
};

inline constexpr double kPaPerAtm = 101325.0;

inline double pa_to_atm(double p_pa) { return p_pa / kPaPerAtm; }

// Defined conversion for scenario flow setpoints (air at 1 atm, 25 C).
inline constexpr double kKgPerSecPerSlpm = 2.083e-5;

}  // namespace pemfc
