/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include "irf/chain.hpp"
#include "irf/config.hpp"
#include "irf/cramer.hpp"
#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/parallel.hpp"
#include "irf/point.hpp"
#include "irf/quadrature.hpp"
#include "irf/random.hpp"
#include "irf/run.hpp"
#include "irf/stable.hpp"
#include "irf/stats.hpp"
#include "irf/support.hpp"
#include "irf/svg.hpp"
#include "irf/tail.hpp"
#include "irf/version.hpp"
