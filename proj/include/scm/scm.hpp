#ifndef SCM_SCM_HPP
#define SCM_SCM_HPP

#include "scm/calibration.hpp"
#include "scm/commands.hpp"
#include "scm/config.hpp"
#include "scm/csv.hpp"
#include "scm/linecode.hpp"
#include "scm/optical_chain.hpp"
#include "scm/psd_features.hpp"
#include "scm/sir_analysis.hpp"
#include "scm/spectral.hpp"

#endif  // SCM_SCM_HPP
