#ifndef WGTEST_WGTEST_HPP
#define WGTEST_WGTEST_HPP

#include "wgtest/error.hpp"
#include "wgtest/graph_core.hpp"
#include "wgtest/random.hpp"
#include "wgtest/model_gen.hpp"
#include "wgtest/normal.hpp"
#include "wgtest/two_sample_test.hpp"
#include "wgtest/theory.hpp"
#include "wgtest/parallel.hpp"
#include "wgtest/sim_harness.hpp"
#include "wgtest/real_data.hpp"
#include "wgtest/config.hpp"

#endif
