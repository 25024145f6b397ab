// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include "kgtrick/dataset_builder.hpp"
#include "kgtrick/ensembler.hpp"
#include "kgtrick/error.hpp"
#include "kgtrick/evaluator.hpp"
#include "kgtrick/genbackend.hpp"
#include "kgtrick/kgstore.hpp"
#include "kgtrick/language.hpp"
#include "kgtrick/linker.hpp"
#include "kgtrick/metrics.hpp"
#include "kgtrick/report.hpp"
#include "kgtrick/snapshot.hpp"
#include "kgtrick/text.hpp"
#include "kgtrick/verbalizer.hpp"
