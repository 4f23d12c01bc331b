#pragma once

#include "dhyper/curves.hpp"
#include "dhyper/error.hpp"
#include "dhyper/fields.hpp"
#include "dhyper/gf.hpp"
#include "dhyper/polyring.hpp"
#include "dhyper/report.hpp"
#include "dhyper/shimura.hpp"
