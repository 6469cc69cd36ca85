/*
 * Copyright 2026 The phasediag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "phasediag/diagram.hpp"
#include "phasediag/errors.hpp"
#include "phasediag/expr.hpp"
#include "phasediag/geometry.hpp"
#include "phasediag/lexpoly.hpp"
#include "phasediag/lexsys.hpp"
#include "phasediag/lp.hpp"
#include "phasediag/matrix.hpp"
#include "phasediag/model.hpp"
#include "phasediag/model_io.hpp"
#include "phasediag/polyhedron.hpp"
#include "phasediag/polynomial.hpp"
#include "phasediag/rational.hpp"
#include "phasediag/report.hpp"
#include "phasediag/simulate.hpp"
#include "phasediag/throughput.hpp"
