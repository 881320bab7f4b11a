/*
 * Copyright 2026 The polargen authors
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

#include "polargen/bit_vector.hpp"
#include "polargen/explore.hpp"
#include "polargen/formula.hpp"
#include "polargen/golden.hpp"
#include "polargen/netlist.hpp"
#include "polargen/netlist_json.hpp"
#include "polargen/rtl.hpp"
#include "polargen/sim.hpp"
#include "polargen/stimulus.hpp"
