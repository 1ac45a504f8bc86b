#pragma once

// Umbrella header.

#include "entrolab/balls.hpp"
#include "entrolab/cocycle.hpp"
#include "entrolab/common.hpp"
#include "entrolab/config.hpp"
#include "entrolab/covers.hpp"
#include "entrolab/entropy.hpp"
#include "entrolab/experiments.hpp"
#include "entrolab/homology.hpp"
#include "entrolab/linalg.hpp"
#include "entrolab/maps.hpp"
#include "entrolab/metric_entropy.hpp"
#include "entrolab/nets.hpp"
#include "entrolab/parallel.hpp"
#include "entrolab/partition.hpp"
#include "entrolab/periodic.hpp"
#include "entrolab/pliss.hpp"
#include "entrolab/point_cloud.hpp"
#include "entrolab/splitting.hpp"
#include "entrolab/tail.hpp"
