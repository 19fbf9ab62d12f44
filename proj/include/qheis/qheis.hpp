#pragma once

#include "qheis/braid.hpp"
#include "qheis/config.hpp"
#include "qheis/deform.hpp"
#include "qheis/fock.hpp"
#include "qheis/harness.hpp"
#include "qheis/kz.hpp"
#include "qheis/liealg.hpp"
#include "qheis/ode.hpp"
#include "qheis/qspecial.hpp"
#include "qheis/report.hpp"
#include "qheis/soshift.hpp"
#include "qheis/verify.hpp"
