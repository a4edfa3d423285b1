#ifndef MARKOV_MARKOV_HPP
#define MARKOV_MARKOV_HPP

#include "markov_core.hpp"
#include "slope_geometry.hpp"
#include "enumeration.hpp"
#include "muc_checker.hpp"
#include "precision_real.hpp"
#include "precision_series.hpp"
#include "reports.hpp"

#endif // MARKOV_MARKOV_HPP
