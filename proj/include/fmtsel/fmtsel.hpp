// Copyright 2026 The fmtsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "fmtsel/catalog.hpp"
#include "fmtsel/cli.hpp"
#include "fmtsel/config.hpp"
#include "fmtsel/cost_model.hpp"
#include "fmtsel/crossover.hpp"
#include "fmtsel/error.hpp"
#include "fmtsel/fixtures.hpp"
#include "fmtsel/formats.hpp"
#include "fmtsel/layout_model.hpp"
#include "fmtsel/random.hpp"
#include "fmtsel/reference_writer.hpp"
#include "fmtsel/report.hpp"
#include "fmtsel/selector.hpp"
#include "fmtsel/simulation.hpp"
#include "fmtsel/validation.hpp"
#include "fmtsel/workflow.hpp"
