#pragma once

// Umbrella header for the whole toolkit.

#include "loadcast/calendar.hpp"
#include "loadcast/config.hpp"
#include "loadcast/dataset.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/forecast.hpp"
#include "loadcast/ingest.hpp"
#include "loadcast/nn.hpp"
#include "loadcast/numerics.hpp"
#include "loadcast/optim.hpp"
#include "loadcast/report.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/scan.hpp"
#include "loadcast/series.hpp"
#include "loadcast/synth.hpp"
#include "loadcast/textio.hpp"
#include "loadcast/train.hpp"
