#pragma once

#include <doctest.h>

// doctest::Approx adds an absolute margin of epsilon by default; this one is purely relative.
inline doctest::Approx rel(double value) { return doctest::Approx(value).scale(0.0); }
