#ifndef MUI_PID_HPP
#define MUI_PID_HPP

#include "mui/units.hpp"

namespace mui {

/// Unsymmetrized partial information decomposition terms.
/// R and S are defined by subtraction: R_X = I(M;X) - UI_X,
/// S_X = I(M;X|Y) - UI_X, and the Y analogues.
struct PIDTerms {
    double i_mx = 0.0, i_my = 0.0;
    double i_mx_given_y = 0.0, i_my_given_x = 0.0;
    double ui_x = 0.0, ui_y = 0.0;
    double r_x = 0.0, r_y = 0.0;
    double s_x = 0.0, s_y = 0.0;
    InfoUnit unit = InfoUnit::bits;

    /// Fills the subtraction-defined terms from the six inputs.
    void finish() {
        r_x = i_mx - ui_x;
        s_x = i_mx_given_y - ui_x;
        r_y = i_my - ui_y;
        s_y = i_my_given_x - ui_y;
    }
};

}  // namespace mui

#endif  // MUI_PID_HPP
