#ifndef MUI_MUI_HPP
#define MUI_MUI_HPP

// Umbrella header.

#include "mui/units.hpp"
#include "mui/discrete.hpp"
#include "mui/gaussian.hpp"
#include "mui/pid.hpp"
#include "mui/gaussian_ui.hpp"
#include "mui/simplex.hpp"
#include "mui/discrete_ui.hpp"
#include "mui/verify.hpp"

#endif  // MUI_MUI_HPP
