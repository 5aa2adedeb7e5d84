#ifndef NOMA_ALOHA_NOMA_ALOHA_HPP
#define NOMA_ALOHA_NOMA_ALOHA_HPP

#include "analytic.hpp"
#include "experiment.hpp"
#include "optimizer.hpp"
#include "random.hpp"
#include "simulator.hpp"
#include "table.hpp"
#include "types.hpp"

#endif
