// Copyright 2026 The Authors.
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

// Umbrella header for the balprice library.

#ifndef BALPRICE_BALPRICE_HPP_
#define BALPRICE_BALPRICE_HPP_

#include "balprice/balance.hpp"
#include "balprice/catalog.hpp"
#include "balprice/core.hpp"
#include "balprice/distribution.hpp"
#include "balprice/io.hpp"
#include "balprice/matroid.hpp"
#include "balprice/mechanism.hpp"
#include "balprice/oracle.hpp"
#include "balprice/parallel.hpp"
#include "balprice/pricing.hpp"
#include "balprice/simplex.hpp"
#include "balprice/stochastic.hpp"

#endif  // BALPRICE_BALPRICE_HPP_
