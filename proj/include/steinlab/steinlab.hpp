#pragma once

#include "steinlab/blaschke_analytics.hpp"
#include "steinlab/criteria_suite.hpp"
#include "steinlab/disk_geometry.hpp"
#include "steinlab/harmonic_majorants.hpp"
#include "steinlab/numerics.hpp"
#include "steinlab/parallel.hpp"
#include "steinlab/quadrature.hpp"
#include "steinlab/random_sequences.hpp"
#include "steinlab/report_io.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/runner.hpp"
#include "steinlab/stochastic_lab.hpp"
