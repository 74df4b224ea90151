#pragma once

#include "hamdeck/counting.hpp"
#include "hamdeck/deadline.hpp"
#include "hamdeck/decompose.hpp"
#include "hamdeck/edge_list.hpp"
#include "hamdeck/error.hpp"
#include "hamdeck/factor.hpp"
#include "hamdeck/graph.hpp"
#include "hamdeck/partition.hpp"
#include "hamdeck/predicates.hpp"
#include "hamdeck/random.hpp"
#include "hamdeck/regularize.hpp"
#include "hamdeck/rotation.hpp"
#include "hamdeck/serialize.hpp"
#include "hamdeck/walecki.hpp"
