#pragma once

#include "tentpole/certify.hpp"
#include "tentpole/complex1d.hpp"
#include "tentpole/config.hpp"
#include "tentpole/interval_sos.hpp"
#include "tentpole/poly.hpp"
#include "tentpole/pwpoly.hpp"
#include "tentpole/rational.hpp"
