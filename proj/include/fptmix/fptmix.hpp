#pragma once

#include "bounds.hpp"
#include "core.hpp"
#include "instances.hpp"
#include "kiob.hpp"
#include "kpath.hpp"
#include "matching.hpp"
#include "oracles.hpp"
#include "p2pack.hpp"
#include "repsets.hpp"
#include "unisets.hpp"
#include "wsp.hpp"
