#pragma once

#include "postfid/channels.hpp"
#include "postfid/detection.hpp"
#include "postfid/errors.hpp"
#include "postfid/fidelity.hpp"
#include "postfid/fock.hpp"
#include "postfid/information.hpp"
#include "postfid/numerics.hpp"
#include "postfid/scenarios.hpp"
#include "postfid/sweep.hpp"
#include "postfid/transfer.hpp"
