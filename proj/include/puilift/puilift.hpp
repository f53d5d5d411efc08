#pragma once

// Umbrella header: exact arithmetic, monoid deciders, the lifting
// machinery, the worked constructions, monoid algebras, and the scenario
// runner with its report emission.

#include "exact.hpp"
#include "monoid.hpp"
#include "lifting.hpp"
#include "counterexample.hpp"
#include "algebra.hpp"
#include "report.hpp"
#include "scenarios.hpp"
