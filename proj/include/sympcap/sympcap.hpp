#pragma once

#include "sympcap/errors.hpp"
#include "sympcap/symplectic.hpp"
#include "sympcap/williamson.hpp"
#include "sympcap/planes.hpp"
#include "sympcap/quasi_random.hpp"
#include "sympcap/quadrature.hpp"
#include "sympcap/potentials.hpp"
#include "sympcap/flow.hpp"
#include "sympcap/capacity.hpp"
#include "sympcap/nonsqueezing.hpp"
#include "sympcap/ebk.hpp"
