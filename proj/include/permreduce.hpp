/*
Copyright 2026 The permreduce Authors

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

#include "permreduce/cost_model.hpp"
#include "permreduce/data_model.hpp"
#include "permreduce/error.hpp"
#include "permreduce/group.hpp"
#include "permreduce/math.hpp"
#include "permreduce/permutation.hpp"
#include "permreduce/schedule.hpp"
#include "permreduce/schedule_io.hpp"
#include "permreduce/simulator.hpp"
