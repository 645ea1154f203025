#include "roughlab/calibrated_constants.hpp"

namespace roughlab {
namespace calibrated {

// Values produced by `roughlab experiment norris-suite --calibrate` at the
// suite parameters below. Placeholders of 1.0 mean "not yet calibrated";
// the calibration run overwrites this file.
const double norris_m = 1.0;
const double prop_derivative_m = 1.0;
const double interp_derivative_m = 1.0;
const double lambda_ratio_bound = 1.0;

const unsigned long long calibration_master_seed = 424242ULL;
const unsigned long long validation_master_seed = 777777ULL;
const int suite_size = 1000;

}  // namespace calibrated
}  // namespace roughlab
