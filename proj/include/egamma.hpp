// Umbrella header.

#ifndef EGAMMA_HPP
#define EGAMMA_HPP

#include <egamma/baxter.hpp>
#include <egamma/cocycle.hpp>
#include <egamma/gamma.hpp>
#include <egamma/identities.hpp>
#include <egamma/phase.hpp>
#include <egamma/qseries.hpp>
#include <egamma/special.hpp>
#include <egamma/suites.hpp>

#endif
