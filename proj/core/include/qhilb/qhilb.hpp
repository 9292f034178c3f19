#pragma once

#include "qhilb/chow.hpp"
#include "qhilb/errors.hpp"
#include "qhilb/gw_engine.hpp"
#include "qhilb/hyperelliptic.hpp"
#include "qhilb/qseries.hpp"
#include "qhilb/quantum.hpp"
#include "qhilb/rational.hpp"
#include "qhilb/report.hpp"
